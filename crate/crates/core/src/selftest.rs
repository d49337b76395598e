//! Data-driven self check over the catalog, with a fault-injection hook.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{catalog, CatalogEntry, Expected, Value};
use crate::code::BinaryCode;
use crate::construction_b::build_construction_b;
use crate::error::{Error, Result};
use crate::lattice::{same_lattice, DualVector, Lattice};
use crate::orbit::Sign;
use crate::report::{analyze, odd_split, AutReport, Config};

/// A deliberate corruption applied before checking, to confirm that the
/// checks notice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Bumps one count of every nonempty `R_L`.
    RCount,
    /// Adds one to every computed orbit size.
    QSize,
    /// Flips every twisted sign.
    TwistedSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r-count" => Ok(Fault::RCount),
            "q-size" => Ok(Fault::QSize),
            "twisted-sign" => Ok(Fault::TwistedSign),
            _ => Err(Error::Input(format!(
                "unknown fault '{s}' (expected r-count, q-size or twisted-sign)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub entry: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub checks: Vec<CheckLine>,
}

fn cmp<T: PartialEq + std::fmt::Debug>(
    out: &mut Vec<String>,
    what: &str,
    want: Option<T>,
    got: T,
) {
    if let Some(w) = want {
        if w != got {
            out.push(format!("{what}: expected {w:?}, got {got:?}"));
        }
    }
}

fn apply_fault(r: &mut AutReport, fault: Option<Fault>) {
    match fault {
        Some(Fault::RCount) => {
            if let Some(c) = r.r_set.counts.first_mut() {
                *c += 1;
            }
        }
        Some(Fault::QSize) => r.q_size += 1,
        Some(Fault::TwistedSign) => {
            r.orbit.twisted_sign = r.orbit.twisted_sign.map(|s| match s {
                Sign::Plus => Sign::Minus,
                Sign::Minus => Sign::Plus,
            })
        }
        None => {}
    }
}

fn check_report(l: &Lattice, r: &AutReport, e: &Expected, out: &mut Vec<String>) {
    if let Err(err) = r.r_set.validate() {
        out.push(err.to_string());
    }
    let formula = 1
        + 2 * r.r_set.len() as u64
        + if r.conditions.any() { r.twisted_character_count } else { 0 };
    if r.q_size != formula || r.q_size != r.orbit.size() {
        out.push(format!("q_size {} disagrees with 1 + 2|R| + twisted = {formula}", r.q_size));
    }
    if r.exceeds_h != (!r.r_set.is_empty() || r.conditions.c) {
        out.push("exceeds_h disagrees with R nonempty or E8".into());
    }
    if !r.conditions.any() && !(2 + 2 * r.r_set.len() as u64).is_power_of_two() {
        out.push("2 + 2|R| is not a power of two".into());
    }
    let expected_sign = if r.conditions.a || r.conditions.c {
        Some(Sign::Minus)
    } else if r.conditions.b {
        Some(Sign::Plus)
    } else {
        None
    };
    if r.orbit.twisted_sign != expected_sign {
        out.push(format!(
            "twisted sign {:?} does not match conditions {:?}",
            r.orbit.twisted_sign, expected_sign
        ));
    }
    let identity: Vec<DualVector> = (0..l.rank())
        .map(|i| DualVector::from_ints(&(0..l.rank()).map(|j| i64::from(i == j)).collect::<Vec<_>>()))
        .collect();
    for (i, d) in r.decompositions.iter().enumerate() {
        match same_lattice(&d.rebuild_generators(), &identity) {
            Ok(true) => {}
            Ok(false) => out.push(format!("decomposition {i} rebuilds a different lattice")),
            Err(err) => out.push(format!("decomposition {i}: {err}")),
        }
    }

    cmp(out, "rank", e.rank, l.rank());
    cmp(out, "determinant", e.determinant, r.lattice.determinant.parse().unwrap_or(0u64));
    cmp(out, "root_count", e.root_count, r.lattice.root_count);
    cmp(out, "r_size", e.r_size, r.r_set.len());
    cmp(out, "q_size", e.q_size, r.q_size);
    cmp(out, "exceeds_h", e.exceeds_h, r.exceeds_h);
    cmp(out, "h_order", e.h_order.map(Some), r.h_order);
    cmp(out, "aut_order", e.aut_order.map(Some), r.aut_order);
    cmp(out, "twisted_count", e.twisted_count, r.twisted_character_count);
    let cond = [('a', r.conditions.a), ('b', r.conditions.b), ('c', r.conditions.c)]
        .into_iter()
        .find(|(_, on)| *on)
        .map(|(c, _)| c);
    if e.condition.is_some() || e.exceeds_h.is_some() {
        cmp(out, "condition", Some(e.condition), cond);
    }
    cmp(
        out,
        "twisted_sign",
        e.twisted_sign.map(Some),
        r.orbit.twisted_sign.map(|s| if s == Sign::Plus { "+" } else { "-" }),
    );
}

fn check_code(c: &BinaryCode, e: &Expected, out: &mut Vec<String>) -> Result<()> {
    cmp(out, "code_dimension", e.code_dimension, c.dimension());
    let dist: Vec<(u32, u64)> = c.weight_distribution()?.into_iter().collect();
    cmp(out, "weight_distribution", e.weight_distribution.clone(), dist.clone());
    if c.is_doubly_even() {
        let l = build_construction_b(c, None)?.lattice;
        let c4 = dist.iter().find(|(w, _)| *w == 4).map_or(0, |p| p.1);
        if l.root_count() as u64 != 8 * c4 {
            out.push(format!("|L_B(C)_2| = {} but 8|C_4| = {}", l.root_count(), 8 * c4));
        }
    }
    Ok(())
}

fn check_entry(entry: &CatalogEntry, cfg: Config, fault: Option<Fault>) -> CheckLine {
    let mut failures = Vec::new();
    let run = |failures: &mut Vec<String>| -> Result<()> {
        match entry.build()? {
            Value::Lattice(l) if l.is_even() => {
                let mut r = analyze(&l, cfg)?;
                apply_fault(&mut r, fault);
                check_report(&l, &r, &entry.expected, failures);
            }
            Value::Lattice(l) => {
                cmp(failures, "rank", entry.expected.rank, l.rank());
                let o = odd_split(&l, cfg)?;
                if !o.two_alpha_in_even || !o.doubles_in_even || o.index != 2 {
                    failures.push("odd split is not an index-2 even sublattice".into());
                }
                let e = Lattice::new(o.even_gram.clone())?;
                let mut r = o.even_report;
                apply_fault(&mut r, fault);
                check_report(&e, &r, &Expected::default(), failures);
            }
            Value::Code(c) => check_code(&c, &entry.expected, failures)?,
        }
        Ok(())
    };
    if let Err(err) = run(&mut failures) {
        failures.push(format!("error: {err}"));
    }
    CheckLine {
        entry: entry.name.to_string(),
        passed: failures.is_empty(),
        failures,
    }
}

/// Checks every catalog entry against its expected invariants and against
/// the internal consistency relations of the report.
pub fn run_selftest(cfg: Config, fault: Option<Fault>) -> SelftestReport {
    let checks: Vec<CheckLine> = catalog()
        .par_iter()
        .map(|e| check_entry(e, cfg, fault))
        .collect();
    SelftestReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
