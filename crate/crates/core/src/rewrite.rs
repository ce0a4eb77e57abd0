//! The algebra of monotone derivatives.
//!
//! A monotone symbol `M(Y;β)` stands for `𝒟^β(ιY)` with `Y` a coordinate of
//! order at most `s+1`; `M(Y;0)` is the plain ι-symbol `I(Y)`. Expressions
//! over these symbols are ordinary [`RatExpr`]s. The formal derivations `𝔇_i`
//! act on them without reference to jets, `φ` evaluates them back into
//! ι-expressions, and `ψ` embeds ι-expressions by rewriting every high-order
//! ι-symbol into normal derivatives.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::jets::{check_jet_expr, mi_split};
use crate::kernel::{Coord, Indet, MultiIndex, RatExpr};

pub const DEFAULT_MAX_DEPTH: usize = 256;

/// Memoizing evaluator for `ψ`, `𝔇_i` and `φ` over one frame.
#[derive(Debug)]
pub struct Rewriter<'f> {
    frame: &'f Frame,
    /// `ψ(Λ_{ijk})`, laid out like the frame's table.
    psi_lambda: Vec<RatExpr>,
    normal: RwLock<HashMap<(u8, MultiIndex), RatExpr>>,
    fd: RwLock<HashMap<(usize, Coord, MultiIndex), RatExpr>>,
    phi: RwLock<HashMap<(Coord, MultiIndex), RatExpr>>,
    nsym: RwLock<HashMap<(Coord, MultiIndex), RatExpr>>,
    max_depth: usize,
}

fn sym(c: Coord, beta: MultiIndex) -> RatExpr {
    RatExpr::var(Indet::mono(c, beta))
}

impl<'f> Rewriter<'f> {
    pub fn new(frame: &'f Frame) -> Result<Self> {
        let m = frame.m();
        let mut rw = Rewriter {
            frame,
            psi_lambda: Vec::new(),
            normal: RwLock::new(HashMap::new()),
            fd: RwLock::new(HashMap::new()),
            phi: RwLock::new(HashMap::new()),
            nsym: RwLock::new(HashMap::new()),
            max_depth: DEFAULT_MAX_DEPTH,
        };
        let mut table = Vec::with_capacity(m * m * m);
        for i in 1..=m {
            for j in 1..=m {
                for k in 1..=m {
                    table.push(rw.psi_of_inv(frame.lambda(i, j, k))?);
                }
            }
        }
        rw.psi_lambda = table;
        Ok(rw)
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn frame(&self) -> &'f Frame {
        self.frame
    }

    fn s_plus_1(&self) -> u32 {
        self.frame.s() + 1
    }

    fn c(&self, i: usize, j: usize, k: usize) -> &RatExpr {
        let m = self.frame.m();
        &self.psi_lambda[((i - 1) * m + (j - 1)) * m + (k - 1)]
    }

    /// `ψ(f)` for `f` over jet coordinates; not reduced, so `ψ(p_j)` is the
    /// R-record itself.
    pub fn psi_embed(&self, f: &RatExpr) -> Result<RatExpr> {
        check_jet_expr(f)?;
        self.psi_of_inv(&f.rename(|v| match v {
            Indet::Coord(c) => Indet::Inv(*c),
            other => *other,
        }))
    }

    /// Replaces every `I(u_γ)` with `|γ| > s+1` by its normal rewriting.
    pub fn psi_of_inv(&self, e: &RatExpr) -> Result<RatExpr> {
        let sp1 = self.s_plus_1();
        let mut subst = HashMap::new();
        for v in e.vars() {
            if let Indet::Inv(Coord::U(j, g)) = v {
                if g.order() > sp1 {
                    subst.insert(v, self.rewrite_to_normal(j as usize, &g)?);
                }
            }
        }
        if subst.is_empty() {
            return Ok(e.clone());
        }
        e.substitute(&subst)
    }

    /// Normal-derivative expression whose `φ`-image is `ι u_{j,β}`.
    pub fn rewrite_to_normal(&self, j: usize, beta: &MultiIndex) -> Result<RatExpr> {
        let z = Coord::u(j, *beta);
        if beta.order() <= self.s_plus_1() {
            return Ok(RatExpr::var(Indet::Inv(z)));
        }
        if let Some(v) = self.normal.read().expect("lock").get(&(j as u8, *beta)) {
            return Ok(v.clone());
        }
        let f = beta.fs();
        let gamma = beta.sub_unit(f).expect("fs component is non-zero");
        let lower = self.rewrite_to_normal(j, &gamma)?;
        let derived = self.formal_derive(f, &lower)?;
        let corr = self.psi_of_inv(&self.frame.k_iota_v(f, &Coord::u(j, gamma))?)?;
        let v = self.normalize(&(&derived + &corr))?;
        self.normal.write().expect("lock").insert((j as u8, *beta), v.clone());
        Ok(v)
    }

    /// `𝔇_i(t)`, extended from symbols as a derivation.
    pub fn formal_derive(&self, i: usize, t: &RatExpr) -> Result<RatExpr> {
        self.fd_expr(i, t, 0)
    }

    /// `𝔇^α(t)`, applying `𝔇_m` first so that monotone symbols stay monotone.
    pub fn formal_derive_multi(&self, alpha: &MultiIndex, t: &RatExpr) -> Result<RatExpr> {
        let mut out = t.clone();
        for i in (1..=alpha.dim()).rev() {
            for _ in 0..alpha.get(i) {
                out = self.formal_derive(i, &out)?;
            }
        }
        Ok(out)
    }

    fn fd_expr(&self, i: usize, t: &RatExpr, depth: usize) -> Result<RatExpr> {
        let mut coeffs = HashMap::new();
        for v in t.vars() {
            match v {
                Indet::Param(_) => {}
                Indet::Inv(c) => {
                    coeffs.insert(v, self.fd_sym(i, c, MultiIndex::zeros(self.frame.m()), depth)?);
                }
                Indet::Mono(c, b) => {
                    coeffs.insert(v, self.fd_sym(i, c, b, depth)?);
                }
                Indet::Coord(_) => return Err(Error::IllegalIndeterminate(self.frame.ctx().names.indet(&v))),
            }
        }
        t.derivation(|v| coeffs.get(v).cloned())
    }

    fn fd_sym(&self, i: usize, c: Coord, beta: MultiIndex, depth: usize) -> Result<RatExpr> {
        if i <= beta.fs() {
            return Ok(sym(c, beta.add_unit(i)));
        }
        if depth > self.max_depth {
            return Err(Error::RecursionDepth("formal_derive"));
        }
        if let Some(v) = self.fd.read().expect("lock").get(&(i, c, beta)) {
            return Ok(v.clone());
        }
        // 𝔇_i 𝔇_f y = 𝔇_f 𝔇_i y + Σ_l ψ(Λ_{ifl}) 𝔇_l y with f = fs(β) < i.
        let f = beta.fs();
        let gamma = beta.sub_unit(f).expect("fs component is non-zero");
        let inner = self.fd_sym(i, c, gamma, depth + 1)?;
        let mut acc = self.fd_expr(f, &inner, depth + 1)?;
        for l in 1..=self.frame.m() {
            let coef = self.c(i, f, l);
            if coef.is_zero() {
                continue;
            }
            acc = &acc + &(coef * &self.fd_sym(l, c, gamma, depth + 1)?);
        }
        self.fd.write().expect("lock").insert((i, c, beta), acc.clone());
        Ok(acc)
    }

    /// `φ(M(Y;β)) = 𝒟_f(φ(M(Y;β−ε_f)))` with `f = fs(β)`, as a reduced
    /// ι-expression.
    pub fn phi_sym(&self, c: Coord, beta: &MultiIndex) -> Result<RatExpr> {
        if beta.is_zero() {
            return self.frame.reduce(&RatExpr::var(Indet::Inv(c)));
        }
        if let Some(v) = self.phi.read().expect("lock").get(&(c, *beta)) {
            return Ok(v.clone());
        }
        let f = beta.fs();
        let prev = self.phi_sym(c, &beta.sub_unit(f).expect("fs component is non-zero"))?;
        let v = self.frame.derive_inv_expr(f, &prev)?;
        self.phi.write().expect("lock").insert((c, *beta), v.clone());
        Ok(v)
    }

    /// `φ(t)`, ι-reduced.
    pub fn phi_eval(&self, t: &RatExpr) -> Result<RatExpr> {
        let mut subst = HashMap::new();
        for v in t.vars() {
            match v {
                Indet::Mono(c, b) => {
                    subst.insert(v, self.phi_sym(c, &b)?);
                }
                Indet::Coord(_) => return Err(Error::IllegalIndeterminate(self.frame.ctx().names.indet(&v))),
                _ => {}
            }
        }
        if subst.is_empty() {
            return self.frame.reduce(t);
        }
        self.frame.reduce(&t.substitute(&subst)?)
    }

    /// True iff the symbol is a normal derivative: `I(x_i)`, `I(u_γ)` with
    /// `|γ| ≤ s+1`, or `M(u_γ;β)` with `(β, γ)` the splitting of `β+γ`.
    pub fn is_normal_symbol(&self, v: &Indet) -> bool {
        let sp1 = self.s_plus_1();
        match v {
            Indet::Param(_) => true,
            Indet::Coord(_) => false,
            Indet::Inv(Coord::X(_)) => true,
            Indet::Inv(Coord::U(_, g)) => g.order() <= sp1,
            Indet::Mono(Coord::X(_), _) => false,
            Indet::Mono(Coord::U(_, g), b) => g.order() <= sp1 && mi_split(&b.add(g), sp1) == (*b, *g),
        }
    }

    pub fn is_normal_form(&self, t: &RatExpr) -> bool {
        t.vars().iter().all(|v| self.is_normal_symbol(v))
    }

    /// Normal-derivative expression of a single symbol, memoized.
    fn normal_symbol(&self, c: Coord, beta: &MultiIndex) -> Result<RatExpr> {
        let v = Indet::mono(c, *beta);
        if self.is_normal_symbol(&v) {
            return Ok(RatExpr::var(v));
        }
        if let (Coord::U(j, g), true) = (c, beta.is_zero()) {
            return self.rewrite_to_normal(j as usize, &g);
        }
        if let Some(e) = self.nsym.read().expect("lock").get(&(c, *beta)) {
            return Ok(e.clone());
        }
        // The symbol has the same φ-image as ψ of its evaluation; every
        // ι-symbol in that evaluation has order at most that of the symbol.
        let e = self.psi_of_inv(&self.phi_sym(c, beta)?)?;
        self.nsym.write().expect("lock").insert((c, *beta), e.clone());
        Ok(e)
    }

    /// Rewrites every symbol of `t` into normal derivatives, then ι-reduces.
    pub fn normalize(&self, t: &RatExpr) -> Result<RatExpr> {
        let mut subst = HashMap::new();
        for v in t.vars() {
            let e = match v {
                Indet::Inv(c) => self.normal_symbol(c, &MultiIndex::zeros(self.frame.m()))?,
                Indet::Mono(c, b) => self.normal_symbol(c, &b)?,
                Indet::Param(_) => continue,
                Indet::Coord(_) => return Err(Error::IllegalIndeterminate(self.frame.ctx().names.indet(&v))),
            };
            if e != RatExpr::var(v) {
                subst.insert(v, e);
            }
        }
        let out = if subst.is_empty() { t.clone() } else { t.substitute(&subst)? };
        self.frame.reduce(&out)
    }
}
