//! Multi-index combinatorics and total derivations.

use crate::error::{Error, Result};
use crate::kernel::{Coord, Indet, MultiIndex, Names, RatExpr};

/// The jet-space frame the engine works in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetContext {
    pub m: usize,
    pub n: usize,
    pub names: Names,
    /// Bound `s+1` for the monotone splitting; set from the cross-section.
    pub s_plus_1: u32,
}

impl JetContext {
    pub fn new(names: Names) -> Self {
        let (m, n) = (names.indep.len(), names.dep.len());
        assert!(m >= 1 && n >= 1, "need at least one independent and one dependent variable");
        assert!(m <= crate::kernel::MAX_VARS, "too many independent variables");
        JetContext { m, n, names, s_plus_1: 1 }
    }

    pub fn zero_index(&self) -> MultiIndex {
        MultiIndex::zeros(self.m)
    }

    pub fn unit(&self, i: usize) -> MultiIndex {
        MultiIndex::unit(self.m, i)
    }

    /// All coordinates `x_i` and `u_{j,α}` with `|α| ≤ k`, in canonical order.
    pub fn coords_up_to(&self, k: u32) -> Vec<Coord> {
        let mut out: Vec<Coord> = (0..self.m).map(Coord::x).collect();
        for j in 0..self.n {
            for a in MultiIndex::up_to_order(self.m, k) {
                out.push(Coord::u(j, a));
            }
        }
        out
    }

    pub fn split(&self, beta: &MultiIndex) -> (MultiIndex, MultiIndex) {
        mi_split(beta, self.s_plus_1)
    }
}

/// `D_i(e)`, `i` 1-based.
pub fn total_derive(e: &RatExpr, i: usize) -> Result<RatExpr> {
    check_jet_expr(e)?;
    e.derivation(|v| match v {
        Indet::Coord(Coord::X(j)) => Some(if *j as usize + 1 == i { RatExpr::one() } else { RatExpr::zero() }),
        Indet::Coord(Coord::U(j, a)) => Some(RatExpr::var(Indet::u(*j as usize, a.add_unit(i)))),
        _ => None,
    })
}

/// `D^α(e)`, applying the highest-index derivation first.
pub fn total_derive_multi(e: &RatExpr, alpha: &MultiIndex) -> Result<RatExpr> {
    let mut out = e.clone();
    for i in (1..=alpha.dim()).rev() {
        for _ in 0..alpha.get(i) {
            out = total_derive(&out, i)?;
        }
    }
    Ok(out)
}

pub fn check_jet_expr(e: &RatExpr) -> Result<()> {
    for v in e.vars() {
        if matches!(v, Indet::Inv(_) | Indet::Mono(..)) {
            return Err(Error::IllegalIndeterminate(format!("{v:?}")));
        }
    }
    Ok(())
}

/// Monotone splitting `β = ĉ + β̄` with `|β̄| ≤ s+1` and `ls(ĉ) ≤ fs(β̄)`.
pub fn mi_split(beta: &MultiIndex, s_plus_1: u32) -> (MultiIndex, MultiIndex) {
    let m = beta.dim();
    if beta.order() <= s_plus_1 {
        return (MultiIndex::zeros(m), *beta);
    }
    let mut tail = 0;
    let mut i = m;
    while i >= 1 {
        tail += beta.get(i);
        if tail >= s_plus_1 {
            break;
        }
        i -= 1;
    }
    let rest: u32 = (i + 1..=m).map(|k| beta.get(k)).sum();
    let mut bar = vec![0u32; m];
    bar[i - 1] = s_plus_1 - rest;
    for k in i + 1..=m {
        bar[k - 1] = beta.get(k);
    }
    let bar = MultiIndex::from_slice(&bar);
    let hat = beta.sub(&bar).expect("β̄ ≤ β componentwise");
    (hat, bar)
}

/// `(fs, ls)` with sentinels `(m+1, 0)` for the zero index.
pub fn mi_fs_ls(beta: &MultiIndex) -> (usize, usize) {
    (beta.fs(), beta.ls())
}

/// Largest `|α|` over jet coordinates present, `-1` if none.
pub fn jet_order(e: &RatExpr) -> i32 {
    e.vars().iter().filter_map(|v| match v {
        Indet::Coord(c) => c.jet_order().map(|k| k as i32),
        _ => None,
    }).max().unwrap_or(-1)
}

/// Largest `|α|` over base coordinates of ι- or monotone symbols, `-1` if none.
pub fn symbol_order(e: &RatExpr) -> i32 {
    e.vars().iter().filter_map(|v| match v {
        Indet::Inv(c) | Indet::Mono(c, _) => c.jet_order().map(|k| k as i32),
        _ => None,
    }).max().unwrap_or(-1)
}
