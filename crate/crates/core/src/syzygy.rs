//! The syzygy sets R, S, T, edge invariants, and exact verification.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::kernel::{Coord, Indet, MultiIndex, Names, RatExpr};
use crate::rewrite::Rewriter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    R,
    S,
    T,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::R => "R",
            Kind::S => "S",
            Kind::T => "T",
        })
    }
}

/// Which generator a record belongs to; derivation indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecIndex {
    /// Cross-section equation, 1-based.
    Rule(usize),
    /// `S_i^Y`.
    Deriv { i: usize, coord: Coord },
    /// `T_i^{u_β}`.
    Cross { i: usize, dep: usize, beta: MultiIndex },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyRec {
    pub kind: Kind,
    pub index: RecIndex,
    pub body: RatExpr,
}

impl SyzygyRec {
    pub fn index_label(&self, names: &Names) -> String {
        match self.index {
            RecIndex::Rule(j) => j.to_string(),
            RecIndex::Deriv { i, coord } => format!("{i};{}", names.coord(&coord)),
            RecIndex::Cross { i, dep, beta } => format!("{i};{}", names.coord(&Coord::u(dep, beta))),
        }
    }

    /// `KIND<TAB>INDICES<TAB>expression`.
    pub fn dump_line(&self, names: &Names) -> String {
        format!("{}\t{}\t{}", self.kind, self.index_label(names), names.expr(&self.body))
    }
}

/// Edge invariants `ι(D_i p_j)` (labelled `E[i,j]`) and the order-zero
/// normalized invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    pub edge: Vec<(String, RatExpr)>,
    pub order_zero: Vec<RatExpr>,
    pub minimal: bool,
}

fn mono(c: Coord, beta: MultiIndex) -> RatExpr {
    RatExpr::var(Indet::mono(c, beta))
}

/// `p_j` over order-zero symbols, unreduced.
pub fn gen_r(rw: &Rewriter) -> Result<Vec<SyzygyRec>> {
    let frame = rw.frame();
    frame
        .cross_section()
        .p()
        .iter()
        .enumerate()
        .map(|(j, p)| Ok(SyzygyRec { kind: Kind::R, index: RecIndex::Rule(j + 1), body: rw.psi_embed(p)? }))
        .collect()
}

/// `S_i^Y = M(Y;ε_i) − ψ(𝒟_i ιY)` for `Y = x_j` and `Y = u_α`, `|α| ≤ s`.
pub fn gen_s(rw: &Rewriter) -> Result<Vec<SyzygyRec>> {
    let frame = rw.frame();
    let ctx = frame.ctx();
    let mut out = Vec::new();
    for coord in ctx.coords_up_to(frame.s()) {
        for i in 1..=ctx.m {
            let rhs = rw.psi_of_inv(&frame.derive_coord(i, &coord)?)?;
            let body = frame.reduce(&(&mono(coord, ctx.unit(i)) - &rhs))?;
            out.push(SyzygyRec { kind: Kind::S, index: RecIndex::Deriv { i, coord }, body });
        }
    }
    Ok(out)
}

/// For `|β| = s+1`, `f = fs(β) < i`, `β' = β + ε_i − ε_f`:
/// `T_i^{u_β} = M(u_β;ε_i) − M(u_β';ε_f) + ψ(Σ_a K_{ia} ιV_a(u_β) − K_{fa} ιV_a(u_β'))`.
pub fn gen_t(rw: &Rewriter) -> Result<Vec<SyzygyRec>> {
    let frame = rw.frame();
    let ctx = frame.ctx();
    let mut out = Vec::new();
    for dep in 0..ctx.n {
        for beta in MultiIndex::of_order(ctx.m, frame.s() + 1) {
            let f = beta.fs();
            for i in f + 1..=ctx.m {
                let beta2 = beta.add_unit(i).sub_unit(f).expect("fs component is non-zero");
                let (z, z2) = (Coord::u(dep, beta), Coord::u(dep, beta2));
                let corr = &frame.k_iota_v(i, &z)? - &frame.k_iota_v(f, &z2)?;
                let body = &(&mono(z, ctx.unit(i)) - &mono(z2, ctx.unit(f))) + &rw.psi_of_inv(&corr)?;
                let body = frame.reduce(&body)?;
                out.push(SyzygyRec { kind: Kind::T, index: RecIndex::Cross { i, dep, beta }, body });
            }
        }
    }
    Ok(out)
}

pub fn gen_all(rw: &Rewriter) -> Result<Vec<SyzygyRec>> {
    let mut out = gen_r(rw)?;
    out.extend(gen_s(rw)?);
    out.extend(gen_t(rw)?);
    Ok(out)
}

/// Closed-form `(|R|, |S|, |T|)` for the frame's dimensions.
pub fn expected_counts(frame: &Frame) -> (usize, usize, usize) {
    let ctx = frame.ctx();
    let (m, n, s) = (ctx.m, ctx.n, frame.s());
    let s_count = m * (m + n * MultiIndex::up_to_order(m, s).len());
    let t_count = n * MultiIndex::of_order(m, s + 1).iter().map(|b| m - b.fs()).sum::<usize>();
    (frame.r(), s_count, t_count)
}

pub fn edge_invariants(frame: &Frame) -> Result<GenSet> {
    if !frame.diagnostics().minimal {
        return Err(Error::NotMinimalOrder);
    }
    let r = frame.r();
    let edge = frame
        .edge_expressions()?
        .into_iter()
        .enumerate()
        .map(|(k, e)| (format!("E[{},{}]", k / r + 1, k % r + 1), e))
        .collect();
    Ok(GenSet { edge, order_zero: frame.order_zero_invariants()?, minimal: true })
}

/// True iff `φ(body)` reduces to zero.
pub fn verify_zero(rw: &Rewriter, rec: &SyzygyRec) -> Result<bool> {
    Ok(rw.phi_eval(&rec.body)?.is_zero())
}

/// Replaces derivatives `M(z;β)` of cross-section leading coordinates by
/// solving `𝔇^β(p_j) = 0` for them, then ι-reduces. Repeats until no such
/// symbol is left; rules are acyclic, so the number of passes is bounded by
/// the number of rules.
pub fn differential_reduce(rw: &Rewriter, t: &RatExpr) -> Result<RatExpr> {
    let frame = rw.frame();
    let rules = &frame.cross_section().rules;
    let by_coord: HashMap<Coord, usize> = rules.iter().enumerate().map(|(k, r)| (r.coord, k)).collect();
    let mut cur = frame.reduce(t)?;
    for _ in 0..=rules.len() {
        let mut subst = HashMap::new();
        for v in cur.vars() {
            let Indet::Mono(c, beta) = v else { continue };
            let Some(&k) = by_coord.get(&c) else { continue };
            let p = rw.psi_embed(&rules[k].p())?;
            let e = rw.formal_derive_multi(&beta, &p)?;
            // e is affine in the target symbol: e = a·M + b
            let a = e.diff(&v);
            let b = &e - &(&a * &RatExpr::var(v));
            subst.insert(v, (-&b).div(&a)?);
        }
        if subst.is_empty() {
            return Ok(cur);
        }
        cur = frame.reduce(&cur.substitute(&subst)?)?;
    }
    Err(Error::RecursionDepth("differential_reduce"))
}

/// Outcome of eliminating first-derivative symbols from a set of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    /// Relations that reduced to zero outright.
    pub zero: usize,
    /// Symbols each solved from one relation.
    pub pivots: Vec<Indet>,
    /// Relations left non-zero after all pivots are substituted.
    pub residual: Vec<RatExpr>,
}

/// Differentially reduces each body, uses each surviving relation to solve
/// for its largest monotone symbol, and substitutes forward. Relations with
/// no monotone symbol left are residual constraints among the generators.
pub fn eliminate(rw: &Rewriter, bodies: &[RatExpr]) -> Result<Elimination> {
    let frame = rw.frame();
    let mut out = Elimination { zero: 0, pivots: Vec::new(), residual: Vec::new() };
    let mut solved: HashMap<Indet, RatExpr> = HashMap::new();
    for b in bodies {
        let mut e = differential_reduce(rw, b)?;
        if !solved.is_empty() {
            e = frame.reduce(&e.substitute(&solved)?)?;
        }
        if e.is_zero() {
            out.zero += 1;
            continue;
        }
        let pivot = e.vars().into_iter().filter(|v| matches!(v, Indet::Mono(..))).max();
        match pivot {
            Some(v) => {
                let a = e.diff(&v);
                let rest = &e - &(&a * &RatExpr::var(v));
                if a.contains_var(&v) {
                    out.residual.push(e);
                    continue;
                }
                let val = (-&rest).div(&a)?;
                for s in solved.values_mut() {
                    let mut one = HashMap::new();
                    one.insert(v, val.clone());
                    *s = frame.reduce(&s.substitute(&one)?)?;
                }
                solved.insert(v, val);
                out.pivots.push(v);
            }
            None => out.residual.push(e),
        }
    }
    Ok(out)
}

/// Zero-tests `engine − printed` directly under ι-reduction, falling back to
/// comparison of normal forms. Returns `None` when neither vanishes.
pub fn compare(rw: &Rewriter, engine: &RatExpr, printed: &RatExpr) -> Result<Option<Match>> {
    let d = rw.frame().reduce(&(engine - printed))?;
    if d.is_zero() {
        return Ok(Some(Match::Direct));
    }
    if rw.normalize(&d)?.is_zero() {
        return Ok(Some(Match::Normalized));
    }
    Ok(None)
}

/// How two relations were found equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Match {
    /// Identical after ι-reduction.
    Direct,
    /// Identical after rewriting every symbol into normal derivatives.
    Normalized,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::q_int;
    use crate::spec::parse_action_spec;

    const SL2: &str = "independent x1 x2\ndependent u\n\
        generator a = [1, 0 | 0]\ngenerator b = [0, 1 | 0]\ngenerator c = [x1, x2 | 0]\n\
        cross_section order 1\n  x1 -> 0\n  x2 -> 0\n  u[1,0]^2 -> 1 - u[0,1]^2\n";

    #[test]
    fn sl2_counts_and_verification() {
        let frame = parse_action_spec(SL2).unwrap().frame().unwrap();
        let rw = Rewriter::new(&frame).unwrap();
        let all = gen_all(&rw).unwrap();
        let count = |k| all.iter().filter(|r| r.kind == k).count();
        assert_eq!((count(Kind::R), count(Kind::S), count(Kind::T)), expected_counts(&frame));
        assert_eq!(expected_counts(&frame), (3, 10, 2));
        for rec in &all {
            assert!(verify_zero(&rw, rec).unwrap(), "{:?}", rec.index);
        }
        let mut bad = all[5].clone();
        bad.body = &bad.body + &RatExpr::one();
        assert!(!verify_zero(&rw, &bad).unwrap());
    }

    #[test]
    fn sl2_t_record_matches_print() {
        let spec = parse_action_spec(SL2).unwrap();
        let frame = spec.frame().unwrap();
        let rw = Rewriter::new(&frame).unwrap();
        let t = gen_t(&rw).unwrap();
        let printed = crate::parse::parse_expr(
            "M(u[2,0];0,1) - M(u[1,1];1,0) - 2*I(u[2,0])*w + 2*I(u[1,1])*v",
            &spec.names,
            &Defs(&[
                ("v", "-I(u[1,0])*I(u[2,0]) - I(u[0,1])*I(u[1,1])"),
                ("w", "-I(u[1,0])*I(u[1,1]) - I(u[0,1])*I(u[0,2])"),
            ], &spec.names),
        )
        .unwrap();
        let rec = t.iter().find(|r| r.index_label(&spec.names) == "2;u[2,0]").unwrap();
        assert_eq!(compare(&rw, &rec.body, &printed).unwrap(), Some(Match::Direct));
        let off = &printed + &RatExpr::var(Indet::Inv(Coord::u(0, MultiIndex::from_slice(&[2, 0])))).scale(&q_int(2));
        assert_eq!(compare(&rw, &rec.body, &off).unwrap(), None);
    }

    struct Defs<'a>(&'a [(&'a str, &'a str)], &'a Names);

    impl crate::parse::Scope for Defs<'_> {
        fn name(&self, name: &str) -> Option<RatExpr> {
            let (_, text) = self.0.iter().find(|(n, _)| *n == name)?;
            crate::parse::parse_expr(text, self.1, &crate::parse::NoScope).ok()
        }
    }

    #[test]
    fn edge_requires_minimal_order() {
        let text = "independent x\ndependent u v\n\
            generator t = [1 | 0, 0]\ngenerator a = [0 | 1, 0]\ngenerator b = [0 | 0, 1]\n\
            generator r1 = [0 | v, -u]\ngenerator r2 = [-u | x, 0]\ngenerator r3 = [-v | 0, x]\n\
            cross_section order 3\n  x -> 0\n  u -> 0\n  v -> 0\n  v[1] -> 0\n  v[2] -> 0\n  v[3] -> 1\n";
        let frame = parse_action_spec(text).unwrap().frame().unwrap();
        assert!(matches!(edge_invariants(&frame), Err(Error::NotMinimalOrder)));
    }
}
