//! Figure data: closed forms on the unit interval (figures 1-4), the gap
//! `k̃ - k` (5) and the half-line family (6, 7).

use hardy_core::conjugate;
use hardy_core::reference::example11;
use hardy_core::specfun::{k_factor, k_tilde};
use hardy_core::{Error, Result};

use crate::format::Table;

pub const IDS: std::ops::RangeInclusive<u32> = 1..=7;

/// Figure 5 uses these `p`.
pub const FIG5_P: [f64; 5] = [1.1, 2.0, 5.0, 10.0, 20.0];

fn diagonal(with_improvements: bool) -> Result<Table> {
    let mut t = if with_improvements {
        Table::new(&["p", "kB", "delta1", "A", "deltabar1", "B"])
    } else {
        Table::new(&["p", "kB", "A", "B"])
    };
    // p in (1.05, 10], step 0.05
    for i in 1..=179 {
        let p = (105 + 5 * i) as f64 / 100.0;
        let c = example11(p, p)?;
        let kb = c.k * c.b;
        let d1 = c.delta1.ok_or(Error::NotApplicable("delta1"))?;
        t.push(if with_improvements {
            vec![p, kb, d1, c.a, c.deltabar1, c.b]
        } else {
            vec![p, kb, c.a, c.b]
        });
    }
    Ok(t)
}

fn above_diagonal(p: f64) -> Result<Table> {
    let mut t = Table::new(&["r", "kB", "delta1", "A_star", "A", "deltabar1", "B"]);
    // r in (0, 15], step 0.1
    for i in 1..=150 {
        let r = i as f64 / 10.0;
        let c = example11(p, p + r)?;
        let d1 = c.delta1.ok_or(Error::NotApplicable("delta1"))?;
        let s = c.a_star.ok_or(Error::NotApplicable("A*"))?;
        t.push(vec![r, c.k * c.b, d1, s, c.a, c.deltabar1, c.b]);
    }
    Ok(t)
}

fn gap() -> Result<Table> {
    let header: Vec<String> = std::iter::once("x".to_string())
        .chain(FIG5_P.iter().map(|p| format!("p={p}")))
        .collect();
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    // x in (0.0001, 25], step 0.01
    for i in 1..=2500 {
        let x = i as f64 / 100.0;
        let mut row = vec![x];
        for p in FIG5_P {
            row.push(k_tilde(p, p + x)? - k_factor(p, p + x)?);
        }
        t.push(row);
    }
    Ok(t)
}

fn half_line(p: f64) -> Result<Table> {
    let mut t = Table::new(&["r", "A", "deltabar1"]);
    let ps = conjugate(p);
    // r in [0, 100], step 0.5; r = 0 is the limit q -> p.
    for i in 0..=200 {
        let r = i as f64 / 2.0;
        let q = p + r;
        let b = (ps / q).powf(1.0 / q);
        let a = k_factor(p, q)? * b;
        t.push(vec![r, a, (p * ps / q).powf(1.0 / q)]);
    }
    Ok(t)
}

pub fn figure(id: u32) -> Result<Table> {
    match id {
        1 => diagonal(false),
        2 => diagonal(true),
        3 => above_diagonal(2.0),
        4 => above_diagonal(5.0),
        5 => gap(),
        6 => half_line(2.0),
        7 => half_line(5.0),
        _ => Err(Error::InvalidInput("figure id must be 1..7")),
    }
}
