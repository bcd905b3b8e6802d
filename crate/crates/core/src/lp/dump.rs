//! CPLEX-style LP text output. Each row is scaled by the least common
//! multiple of its denominators so every coefficient is printed exactly as
//! an integer.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LpModel, Rational, Relation};

fn row_scale<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(v: &Rational, scale: &BigInt) -> BigInt {
    (v * Rational::from_integer(scale.clone())).to_integer()
}

fn write_terms(out: &mut String, terms: &[(usize, Rational)], names: &[String], scale: &BigInt) {
    let mut first = true;
    for (j, a) in terms {
        let c = scaled(a, scale);
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        if first {
            if c.is_negative() {
                out.push_str(" -");
            }
        } else {
            let _ = write!(out, " {sign}");
        }
        if mag.is_one() {
            let _ = write!(out, " {}", names[*j]);
        } else {
            let _ = write!(out, " {mag} {}", names[*j]);
        }
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
}

pub fn write_lp_format(model: &LpModel) -> String {
    let mut out = String::new();
    let obj_scale = row_scale(model.objective.iter());
    let _ = writeln!(out, "\\ objective scaled by {obj_scale}");
    let _ = writeln!(
        out,
        "\\ {} variables, {} constraints",
        model.var_count(),
        model.constraints.len()
    );
    out.push_str("Maximize\n obj:");
    let terms: Vec<(usize, Rational)> = model
        .objective
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, c.clone()))
        .collect();
    write_terms(&mut out, &terms, &model.names, &obj_scale);
    out.push_str("\nSubject To\n");
    for (i, row) in model.constraints.iter().enumerate() {
        let scale = row_scale(row.terms.iter().map(|(_, a)| a).chain(std::iter::once(&row.rhs)));
        let _ = write!(out, " c{i}:");
        write_terms(&mut out, &row.terms, &model.names, &scale);
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(out, " {rel} {}", scaled(&row.rhs, &scale));
    }
    out.push_str("Bounds\n");
    for j in 0..model.var_count() {
        let lo = &model.lower[j];
        match &model.upper[j] {
            Some(u) => {
                let _ = writeln!(out, " {} <= {} <= {}", lo, model.names[j], u);
            }
            None if lo.is_zero() => {}
            None => {
                let _ = writeln!(out, " {} >= {}", model.names[j], lo);
            }
        }
    }
    let binaries: Vec<&str> = (0..model.var_count())
        .filter(|&j| model.integer[j])
        .map(|j| model.names[j].as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("General\n");
        for name in binaries {
            let _ = writeln!(out, " {name}");
        }
    }
    out.push_str("End\n");
    out
}
