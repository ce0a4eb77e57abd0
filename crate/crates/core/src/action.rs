//! Infinitesimal generators on J⁰, their prolongations, and orbit-rank scans.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::jets::{jet_order, total_derive, JetContext};
use crate::kernel::{generic_rank, Coord, Indet, Matrix, MultiIndex, RatExpr};

pub const DEFAULT_MAX_ORDER: u32 = 12;

/// A vector field `Σ ξ_i ∂/∂x_i + Σ η_j ∂/∂u_j` with coefficients on J⁰.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub xi: Vec<RatExpr>,
    pub eta: Vec<RatExpr>,
}

/// Coefficients of a prolonged generator on all coordinates up to `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedGenerator {
    pub order: u32,
    pub coeffs: BTreeMap<Coord, RatExpr>,
}

/// A finite set of generators with memoized prolongation data.
#[derive(Debug)]
pub struct Action {
    ctx: JetContext,
    gens: Vec<Generator>,
    /// `ζ_j = η_j − Σ ξ_i u_{j,ε_i}` per generator and dependent.
    zeta: Vec<Vec<RatExpr>>,
    dzeta: RwLock<HashMap<(usize, usize, MultiIndex), RatExpr>>,
    max_order: u32,
}

impl Action {
    pub fn new(ctx: JetContext, gens: Vec<Generator>) -> Result<Self> {
        let (m, n) = (ctx.m, ctx.n);
        let mut zeta = Vec::with_capacity(gens.len());
        for g in &gens {
            if g.xi.len() != m || g.eta.len() != n {
                return Err(Error::ArityMismatch(format!(
                    "generator {} has {}|{} components, expected {m}|{n}",
                    g.name,
                    g.xi.len(),
                    g.eta.len()
                )));
            }
            for c in g.xi.iter().chain(&g.eta) {
                for v in c.vars() {
                    let ok = match v {
                        Indet::Param(_) | Indet::Coord(Coord::X(_)) => true,
                        Indet::Coord(Coord::U(_, a)) => a.is_zero(),
                        _ => false,
                    };
                    if !ok {
                        return Err(Error::IllegalIndeterminate(format!(
                            "generator {} coefficient uses {}",
                            g.name,
                            ctx.names.indet(&v)
                        )));
                    }
                }
            }
            let mut z = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = g.eta[j].clone();
                for i in 1..=m {
                    let ui = RatExpr::var(Indet::u(j, MultiIndex::unit(m, i)));
                    acc = &acc - &(&g.xi[i - 1] * &ui);
                }
                z.push(acc);
            }
            zeta.push(z);
        }
        Ok(Action { ctx, gens, zeta, dzeta: RwLock::new(HashMap::new()), max_order: DEFAULT_MAX_ORDER })
    }

    pub fn with_max_order(mut self, max: u32) -> Self {
        self.max_order = max;
        self
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    fn d_zeta(&self, a: usize, j: usize, alpha: &MultiIndex) -> Result<RatExpr> {
        if alpha.is_zero() {
            return Ok(self.zeta[a][j].clone());
        }
        if let Some(v) = self.dzeta.read().expect("lock").get(&(a, j, *alpha)) {
            return Ok(v.clone());
        }
        let f = alpha.fs();
        let prev = self.d_zeta(a, j, &alpha.sub_unit(f).expect("fs component non-zero"))?;
        let v = total_derive(&prev, f)?;
        self.dzeta.write().expect("lock").insert((a, j, *alpha), v.clone());
        Ok(v)
    }

    /// Coefficient of `∂/∂z` in the prolongation of generator `a`.
    pub fn coefficient(&self, a: usize, z: &Coord) -> Result<RatExpr> {
        let g = &self.gens[a];
        match z {
            Coord::X(i) => Ok(g.xi[*i as usize].clone()),
            Coord::U(j, alpha) => {
                let ord = alpha.order();
                if ord > self.max_order {
                    return Err(Error::OrderLimit { order: ord, max: self.max_order });
                }
                let j = *j as usize;
                let mut acc = self.d_zeta(a, j, alpha)?;
                for i in 1..=self.ctx.m {
                    if g.xi[i - 1].is_zero() {
                        continue;
                    }
                    let up = RatExpr::var(Indet::u(j, alpha.add_unit(i)));
                    acc = &acc + &(&g.xi[i - 1] * &up);
                }
                Ok(acc)
            }
        }
    }

    pub fn prolong(&self, a: usize, k: u32) -> Result<ProlongedGenerator> {
        let mut coeffs = BTreeMap::new();
        for z in self.ctx.coords_up_to(k) {
            coeffs.insert(z, self.coefficient(a, &z)?);
        }
        Ok(ProlongedGenerator { order: k, coeffs })
    }

    /// `V_a^{(k)}(f)`.
    pub fn apply_generator(&self, a: usize, f: &RatExpr, k: u32) -> Result<RatExpr> {
        let ord = jet_order(f);
        if ord > k as i32 {
            return Err(Error::OrderTooLow { given: k, needed: ord as u32 });
        }
        self.apply(a, f)
    }

    /// `V_a(f)` prolonged to the order of `f`.
    pub fn apply(&self, a: usize, f: &RatExpr) -> Result<RatExpr> {
        crate::jets::check_jet_expr(f)?;
        let mut coeffs = HashMap::new();
        for v in f.vars() {
            if let Indet::Coord(c) = v {
                coeffs.insert(v, self.coefficient(a, &c)?);
            }
        }
        f.derivation(|v| coeffs.get(v).cloned())
    }

    /// `(k, r_k)` for `k ≤ k_max`, `r_k` the generic rank of `(V_a(z))` over
    /// coordinates of order at most `k`.
    pub fn stabilization_scan(&self, k_max: u32) -> Result<Vec<(u32, usize)>> {
        let mut out = Vec::new();
        for k in 0..=k_max {
            let coords = self.ctx.coords_up_to(k);
            let mut rows = Vec::with_capacity(self.gens.len());
            for a in 0..self.gens.len() {
                rows.push(coords.iter().map(|z| self.coefficient(a, z)).collect::<Result<Vec<_>>>()?);
            }
            out.push((k, generic_rank(&Matrix::from_rows(rows))));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Names;

    fn u(k: u32) -> RatExpr {
        RatExpr::var(Indet::u(0, MultiIndex::from_slice(&[k])))
    }

    fn sl1() -> Action {
        let ctx = JetContext::new(Names::new(vec!["x".into()], vec!["u".into()]));
        let x = RatExpr::var(Indet::x(0));
        let gens = vec![
            Generator { name: "v1".into(), xi: vec![x], eta: vec![RatExpr::zero()] },
            Generator { name: "v2".into(), xi: vec![RatExpr::one()], eta: vec![RatExpr::zero()] },
        ];
        Action::new(ctx, gens).unwrap()
    }

    #[test]
    fn sl1_prolongation() {
        let act = sl1();
        let p = act.prolong(0, 4).unwrap();
        for k in 0..=4u32 {
            let c = &p.coeffs[&Coord::u(0, MultiIndex::from_slice(&[k]))];
            assert_eq!(*c, u(k).scale(&crate::kernel::q_int(-(k as i64))));
        }
        let t = act.prolong(1, 3).unwrap();
        assert!(t.coeffs.iter().filter(|(z, _)| matches!(z, Coord::U(..))).all(|(_, c)| c.is_zero()));
        assert_eq!(act.apply_generator(0, &u(2), 2).unwrap(), u(2).scale(&crate::kernel::q_int(-2)));
        assert!(matches!(act.apply_generator(0, &u(3), 2), Err(Error::OrderTooLow { .. })));
    }

    #[test]
    fn translation_scan() {
        let ctx = JetContext::new(Names::new(vec!["x".into()], vec!["u".into()]));
        let act = Action::new(ctx, vec![Generator { name: "t".into(), xi: vec![RatExpr::one()], eta: vec![RatExpr::zero()] }]).unwrap();
        let scan = act.stabilization_scan(3).unwrap();
        assert!(scan.iter().all(|&(_, r)| r == 1));
    }

    #[test]
    fn rejects_jet_dependent_coefficients() {
        let ctx = JetContext::new(Names::new(vec!["x".into()], vec!["u".into()]));
        let g = Generator { name: "bad".into(), xi: vec![u(1)], eta: vec![RatExpr::zero()] };
        assert!(matches!(Action::new(ctx, vec![g]), Err(Error::IllegalIndeterminate(_))));
    }
}
