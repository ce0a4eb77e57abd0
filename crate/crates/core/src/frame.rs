//! Cross-sections, invariantization, the Maurer-Cartan matrix `K`, the
//! recurrence formulae and the commutator table.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::action::Action;
use crate::error::{Error, Result};
use crate::jets::{check_jet_expr, jet_order, total_derive, JetContext};
use crate::kernel::{generic_rank, matrix_inverse, Coord, Frac, Indet, Matrix, RatExpr, ReductionSystem, Rule};

/// One solved cross-section equation `z^power = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsRule {
    pub coord: Coord,
    pub power: u32,
    pub rhs: RatExpr,
}

impl CsRule {
    /// `p = z^power − rhs`.
    pub fn p(&self) -> RatExpr {
        &RatExpr::var(Indet::Coord(self.coord)).pow(self.power) - &self.rhs
    }

    pub fn order(&self) -> u32 {
        let lhs = self.coord.jet_order().unwrap_or(0);
        lhs.max(jet_order(&self.rhs).max(0) as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSection {
    pub rules: Vec<CsRule>,
}

impl CrossSection {
    pub fn new(rules: Vec<CsRule>) -> Self {
        CrossSection { rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Largest jet order of a leading coordinate.
    pub fn order(&self) -> u32 {
        self.rules.iter().map(|r| r.coord.jet_order().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn p(&self) -> Vec<RatExpr> {
        self.rules.iter().map(CsRule::p).collect()
    }
}

/// Outcome of cross-section validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub r: usize,
    pub s: u32,
    pub transversal_rank: usize,
    /// `(k, r_k)` for `k ≤ s`.
    pub orbit_ranks: Vec<(u32, usize)>,
    /// Per `k ≤ s`: `(#{p_j : ord ≤ k}, rank ι V(P_k))`.
    pub projection_ranks: Vec<(usize, usize)>,
    pub minimal: bool,
}

/// A validated moving frame: action plus cross-section, with `K` and `Λ`.
#[derive(Debug)]
pub struct Frame {
    action: Action,
    cs: CrossSection,
    ctx: JetContext,
    iota: ReductionSystem,
    diag: Diagnostics,
    k: Matrix,
    lambda: Vec<RatExpr>,
    dinv: RwLock<HashMap<(usize, Coord), RatExpr>>,
    iv: RwLock<HashMap<(usize, Coord), RatExpr>>,
}

fn inv_of(v: &Indet) -> Indet {
    match v {
        Indet::Coord(c) => Indet::Inv(*c),
        other => *other,
    }
}

impl Frame {
    pub fn new(action: Action, cs: CrossSection) -> Result<Frame> {
        let r = action.len();
        if cs.len() != r {
            return Err(Error::ArityMismatch(format!("{} cross-section rules for {r} generators", cs.len())));
        }
        let coord_rules = cs
            .rules
            .iter()
            .map(|rule| Rule { var: Indet::Coord(rule.coord), power: rule.power, rhs: rule.rhs.clone() })
            .collect();
        ReductionSystem::new(coord_rules)?;
        for rule in &cs.rules {
            check_jet_expr(&rule.rhs)?;
        }
        let iota = ReductionSystem::new(
            cs.rules
                .iter()
                .map(|rule| Rule { var: Indet::Inv(rule.coord), power: rule.power, rhs: rule.rhs.rename(inv_of) })
                .collect(),
        )?;
        let s = cs.order();
        let mut ctx = action.ctx().clone();
        ctx.s_plus_1 = s + 1;
        let mut frame = Frame {
            action,
            cs,
            ctx,
            iota,
            diag: Diagnostics {
                r,
                s,
                transversal_rank: 0,
                orbit_ranks: Vec::new(),
                projection_ranks: Vec::new(),
                minimal: false,
            },
            k: Matrix::zeros(0, 0),
            lambda: Vec::new(),
            dinv: RwLock::new(HashMap::new()),
            iv: RwLock::new(HashMap::new()),
        };
        frame.validate()?;
        frame.k = frame.compute_k()?;
        frame.lambda = frame.compute_lambda()?;
        Ok(frame)
    }

    fn validate(&mut self) -> Result<()> {
        let r = self.diag.r;
        let s = self.diag.s;
        let p = self.cs.p();
        let vp = self.iota_vp(&p)?;
        let rank = generic_rank(&vp);
        self.diag.transversal_rank = rank;
        if rank < r {
            return Err(Error::TransversalityFailure { rank, expected: r });
        }
        self.diag.orbit_ranks = self.action.stabilization_scan(s)?;
        let orders: Vec<u32> = self.cs.rules.iter().map(CsRule::order).collect();
        let mut minimal = true;
        for &(k, rk) in &self.diag.orbit_ranks {
            let pk: Vec<RatExpr> = p.iter().zip(&orders).filter(|(_, &o)| o <= k).map(|(f, _)| f.clone()).collect();
            let count = pk.len();
            let prank = if pk.is_empty() { 0 } else { generic_rank(&self.iota_vp(&pk)?) };
            self.diag.projection_ranks.push((count, prank));
            if count != rk || prank != rk {
                minimal = false;
            }
        }
        self.diag.minimal = minimal;
        Ok(())
    }

    /// `ι(V_a(p_j))` with rows indexed by generator.
    fn iota_vp(&self, p: &[RatExpr]) -> Result<Matrix> {
        let mut rows = Vec::with_capacity(self.action.len());
        for a in 0..self.action.len() {
            rows.push(p.iter().map(|f| self.invariantize(&self.action.apply(a, f)?)).collect::<Result<Vec<_>>>()?);
        }
        Ok(Matrix::from_rows(rows))
    }

    fn compute_k(&self) -> Result<Matrix> {
        let p = self.cs.p();
        let m = self.ctx.m;
        let vp = self.iota_vp(&p)?;
        let vinv = matrix_inverse(&vp)?;
        let mut dp = Vec::with_capacity(m);
        for i in 1..=m {
            dp.push(p.iter().map(|f| self.invariantize(&total_derive(f, i)?)).collect::<Result<Vec<_>>>()?);
        }
        Matrix::from_rows(dp).mul(&vinv).map(|e| self.iota.reduce(e))
    }

    fn compute_lambda(&self) -> Result<Vec<RatExpr>> {
        let m = self.ctx.m;
        let r = self.diag.r;
        // ι(D_j ξ_{ck}) for all j, c, k
        let mut dxi = HashMap::new();
        for c in 0..r {
            for kk in 0..m {
                let xi = &self.action.generators()[c].xi[kk];
                for j in 1..=m {
                    dxi.insert((j, c, kk), self.invariantize(&total_derive(xi, j)?)?);
                }
            }
        }
        let mut lam = vec![RatExpr::zero(); m * m * m];
        for i in 1..=m {
            for j in i + 1..=m {
                for kk in 0..m {
                    let mut acc = Frac::zero();
                    for c in 0..r {
                        let a = &self.k[(i - 1, c)] * &dxi[&(j, c, kk)];
                        let b = &self.k[(j - 1, c)] * &dxi[&(i, c, kk)];
                        acc.add_expr(&(&a - &b));
                    }
                    let v = self.iota.reduce(&acc.finish()?)?;
                    lam[((j - 1) * m + (i - 1)) * m + kk] = -&v;
                    lam[((i - 1) * m + (j - 1)) * m + kk] = v;
                }
            }
        }
        Ok(lam)
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn cross_section(&self) -> &CrossSection {
        &self.cs
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diag
    }

    pub fn s(&self) -> u32 {
        self.diag.s
    }

    pub fn r(&self) -> usize {
        self.diag.r
    }

    pub fn m(&self) -> usize {
        self.ctx.m
    }

    pub fn iota_system(&self) -> &ReductionSystem {
        &self.iota
    }

    /// The Maurer-Cartan matrix, `m × r`.
    pub fn k(&self) -> &Matrix {
        &self.k
    }

    /// `Λ_{ijk}`, indices 1-based; `[𝒟_i, 𝒟_j] = Σ_k Λ_{ijk} 𝒟_k`.
    pub fn lambda(&self, i: usize, j: usize, k: usize) -> &RatExpr {
        let m = self.ctx.m;
        &self.lambda[((i - 1) * m + (j - 1)) * m + (k - 1)]
    }

    pub fn reduce(&self, e: &RatExpr) -> Result<RatExpr> {
        self.iota.reduce(e)
    }

    /// `ι(f)`: every coordinate replaced by its ι-symbol, then reduced.
    pub fn invariantize(&self, f: &RatExpr) -> Result<RatExpr> {
        check_jet_expr(f)?;
        self.iota.reduce(&f.rename(inv_of))
    }

    /// `ι(V_a(z))` for a coordinate, memoized.
    pub fn iota_v(&self, a: usize, z: &Coord) -> Result<RatExpr> {
        if let Some(v) = self.iv.read().expect("lock").get(&(a, *z)) {
            return Ok(v.clone());
        }
        let v = self.invariantize(&self.action.coefficient(a, z)?)?;
        self.iv.write().expect("lock").insert((a, *z), v.clone());
        Ok(v)
    }

    /// `Σ_a K_{ia} ι(V_a(z))`.
    pub fn k_iota_v(&self, i: usize, z: &Coord) -> Result<RatExpr> {
        let mut acc = Frac::zero();
        for a in 0..self.diag.r {
            let kk = &self.k[(i - 1, a)];
            if kk.is_zero() {
                continue;
            }
            let v = self.iota_v(a, z)?;
            if !v.is_zero() {
                acc.add_expr(&(kk * &v));
            }
        }
        self.iota.reduce(&acc.finish()?)
    }

    /// `𝒟_i(ι z) = ι(D_i z) − Σ_a K_{ia} ι(V_a(z))` for a coordinate.
    pub fn derive_coord(&self, i: usize, z: &Coord) -> Result<RatExpr> {
        if let Some(v) = self.dinv.read().expect("lock").get(&(i, *z)) {
            return Ok(v.clone());
        }
        let base = match z {
            Coord::X(j) => RatExpr::int(if *j as usize + 1 == i { 1 } else { 0 }),
            Coord::U(j, a) => self.invariantize(&RatExpr::var(Indet::u(*j as usize, a.add_unit(i))))?,
        };
        let v = self.iota.reduce(&(&base - &self.k_iota_v(i, z)?))?;
        self.dinv.write().expect("lock").insert((i, *z), v.clone());
        Ok(v)
    }

    /// `𝒟_i(ι f) = ι(D_i f) − Σ_a K_{ia} ι(V_a(f))`.
    pub fn derive_invariantized(&self, i: usize, f: &RatExpr) -> Result<RatExpr> {
        let d = self.invariantize(&total_derive(f, i)?)?;
        let mut acc = Frac::zero();
        acc.add_expr(&d);
        for a in 0..self.diag.r {
            let kk = &self.k[(i - 1, a)];
            if kk.is_zero() {
                continue;
            }
            let v = self.invariantize(&self.action.apply(a, f)?)?;
            acc.add_expr(&-(kk * &v));
        }
        self.iota.reduce(&acc.finish()?)
    }

    /// `𝒟_i(E)` for `E` over ι-symbols, by the chain rule.
    pub fn derive_inv_expr(&self, i: usize, e: &RatExpr) -> Result<RatExpr> {
        let mut coeffs = HashMap::new();
        for v in e.vars() {
            match v {
                Indet::Inv(c) => {
                    coeffs.insert(v, self.derive_coord(i, &c)?);
                }
                Indet::Param(_) => {}
                other => return Err(Error::IllegalIndeterminate(self.ctx.names.indet(&other))),
            }
        }
        self.iota.reduce(&e.derivation(|v| coeffs.get(v).cloned())?)
    }

    /// True iff every generator annihilates `f` prolonged to order `k`.
    pub fn check_invariant(&self, f: &RatExpr, k: u32) -> Result<bool> {
        check_invariant(&self.action, f, k)
    }

    /// Edge invariants `ι(D_i(p_j))`, `i`-major.
    pub fn edge_expressions(&self) -> Result<Vec<RatExpr>> {
        let p = self.cs.p();
        let mut out = Vec::new();
        for i in 1..=self.ctx.m {
            for f in &p {
                out.push(self.invariantize(&total_derive(f, i)?)?);
            }
        }
        Ok(out)
    }

    /// Invariantized coordinates of order 0 that the cross-section leaves
    /// free.
    pub fn order_zero_invariants(&self) -> Result<Vec<RatExpr>> {
        let mut out = Vec::new();
        for z in self.ctx.coords_up_to(0) {
            out.push(self.invariantize(&RatExpr::var(Indet::Coord(z)))?);
        }
        Ok(out)
    }
}

pub fn check_invariant(action: &Action, f: &RatExpr, k: u32) -> Result<bool> {
    for a in 0..action.len() {
        if !action.apply_generator(a, f, k)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The classical invariant derivations: `A = (D_i f_j)` and `A⁻¹`.
pub fn classical_derivations(action: &Action, fs: &[RatExpr]) -> Result<(Matrix, Matrix)> {
    let m = action.ctx().m;
    if fs.len() != m {
        return Err(Error::ArityMismatch(format!("{} invariants for {m} independents", fs.len())));
    }
    for (idx, f) in fs.iter().enumerate() {
        let k = jet_order(f).max(0) as u32;
        if !check_invariant(action, f, k)? {
            return Err(Error::NotInvariant(idx + 1));
        }
    }
    let mut rows = Vec::with_capacity(m);
    for i in 1..=m {
        rows.push(fs.iter().map(|f| total_derive(f, i)).collect::<Result<Vec<_>>>()?);
    }
    let a = Matrix::from_rows(rows);
    let inv = matrix_inverse(&a)?;
    Ok((a, inv))
}
