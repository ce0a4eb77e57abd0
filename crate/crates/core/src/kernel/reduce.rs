use std::collections::{BTreeSet, HashMap};

use super::indet::Indet;
use super::poly::{Monomial, Poly};
use super::ratexpr::RatExpr;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub var: Indet,
    pub power: u32,
    pub rhs: RatExpr,
}

/// Rewrite rules `v^k -> rhs`, kept in an order where every rule precedes the
/// rules for the variables its right-hand side introduces.
#[derive(Clone, Debug, Default)]
pub struct ReductionSystem {
    rules: Vec<Rule>,
}

impl ReductionSystem {
    /// Validates and orders the rules: distinct leading variables, no rule
    /// mentions its own variable, and the dependency graph is acyclic.
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &rules {
            if r.power == 0 {
                return Err(Error::RuleShape("rule with zero exponent".into()));
            }
            if !seen.insert(r.var) {
                return Err(Error::RuleShape(format!("duplicate leading indeterminate {:?}", r.var)));
            }
            if r.rhs.contains_var(&r.var) {
                return Err(Error::RuleShape(format!("rule for {:?} mentions itself", r.var)));
            }
        }
        let index: HashMap<Indet, usize> = rules.iter().enumerate().map(|(k, r)| (r.var, k)).collect();
        // Kahn's algorithm, stable on input order.
        let n = rules.len();
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, r) in rules.iter().enumerate() {
            for v in r.rhs.vars() {
                if let Some(&j) = index.get(&v) {
                    succ[k].push(j);
                    indeg[j] += 1;
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: BTreeSet<usize> = (0..n).filter(|&k| indeg[k] == 0).collect();
        while let Some(k) = ready.pop_first() {
            order.push(k);
            for &j in &succ[k] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if order.len() != n {
            return Err(Error::RuleShape("cyclic dependency between rules".into()));
        }
        let mut slots: Vec<Option<Rule>> = rules.into_iter().map(Some).collect();
        let rules = order.into_iter().map(|k| slots[k].take().expect("each once")).collect();
        Ok(ReductionSystem { rules })
    }

    pub fn empty() -> Self {
        ReductionSystem { rules: Vec::new() }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_reducible(&self, e: &RatExpr) -> bool {
        self.rules.iter().any(|r| e.num().degree_in(&r.var) >= r.power || e.den().degree_in(&r.var) >= r.power)
    }

    /// Normal form of `e` modulo the rules.
    pub fn reduce(&self, e: &RatExpr) -> Result<RatExpr> {
        if !self.is_reducible(e) {
            return Ok(e.clone());
        }
        let mut num = e.num().clone();
        let mut den = e.den().clone();
        for rule in &self.rules {
            let (n1, nd) = apply_rule(&num, rule);
            let (d1, dd) = apply_rule(&den, rule);
            if nd.is_one() && dd.is_one() {
                num = n1;
                den = d1;
            } else {
                num = n1.mul(&dd);
                den = d1.mul(&nd);
            }
            if den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
        }
        let out = RatExpr::normalize(num, den)?;
        debug_assert!(!self.is_reducible(&out));
        Ok(out)
    }
}

/// Rewrites `p` by one rule, returning an unnormalized `(num, den)`.
fn apply_rule(p: &Poly, rule: &Rule) -> (Poly, Poly) {
    let k = rule.power;
    if p.degree_in(&rule.var) < k {
        return (p.clone(), Poly::one());
    }
    let coeffs = p.to_univariate(&rule.var);
    let qmax = (coeffs.len() as u32 - 1) / k;
    let (a, b) = (rule.rhs.num(), rule.rhs.den());
    let mut apow = vec![Poly::one()];
    let mut bpow = vec![Poly::one()];
    for _ in 0..qmax {
        let na = apow.last().expect("non-empty").mul(a);
        apow.push(na);
        let nb = bpow.last().expect("non-empty").mul(b);
        bpow.push(nb);
    }
    let mut out = Poly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let j = j as u32;
        let (q, r) = (j / k, j % k);
        let term = c
            .mul_monomial(&Monomial::var(rule.var, r), &num_traits::One::one())
            .mul(&apow[q as usize])
            .mul(&bpow[(qmax - q) as usize]);
        out = out.add(&term);
    }
    (out, bpow[qmax as usize].clone())
}
