#![allow(dead_code)]

use std::collections::HashMap;

use mfk_core::kernel::{Coord, Indet, MultiIndex, Names, RatExpr};
use mfk_core::parse::{parse_expr, Scope};
use mfk_core::rewrite::Rewriter;
use mfk_core::spec::{parse_action_spec, ActionSpecFile};
use mfk_core::Result;

pub const FIXTURES: &[&str] =
    &["sl1", "sl2", "surfaces", "curves_min", "curves_nonmin", "o3_pos", "o3_neg", "e3_pos", "e3_neg"];

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/fixtures/{name}.mfk", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> ActionSpecFile {
    parse_action_spec(&fixture_text(name)).expect("fixture parses")
}

/// Compact notation for hand-transcribed relations.
///
/// `iu012` is `I(u[0,1,2])` (one digit per independent variable, so `iu3`
/// when there is a single one), `ix3` is `I(x3)`, and `D2(e)` is the formal
/// derivation: on a bare ι-symbol it yields the raw symbol `M(u_β; ε₂)`.
/// Named definitions are added with [`Notation::def`].
pub struct Notation<'a> {
    pub names: &'a Names,
    rw: Option<&'a Rewriter<'a>>,
    defs: HashMap<String, RatExpr>,
}

impl<'a> Notation<'a> {
    pub fn new(names: &'a Names, rw: Option<&'a Rewriter<'a>>) -> Self {
        Notation { names, rw, defs: HashMap::new() }
    }

    pub fn def(&mut self, name: &str, text: &str) -> &mut Self {
        let e = self.parse(text);
        self.defs.insert(name.to_string(), e);
        self
    }

    pub fn parse(&self, text: &str) -> RatExpr {
        parse_expr(text, self.names, self).unwrap_or_else(|e| panic!("{text}: {e}"))
    }

    fn symbol(&self, name: &str) -> Option<Coord> {
        let rest = name.strip_prefix('i')?;
        let m = self.names.indep.len();
        if let Some(i) = self.names.indep.iter().position(|x| x == rest) {
            return Some(Coord::x(i));
        }
        for (j, d) in self.names.dep.iter().enumerate() {
            let Some(digits) = rest.strip_prefix(d.as_str()) else { continue };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                continue;
            }
            let parts: Vec<u32> = if m == 1 {
                vec![digits.parse().ok()?]
            } else {
                digits.bytes().map(|b| (b - b'0') as u32).collect()
            };
            if parts.len() == m {
                return Some(Coord::u(j, MultiIndex::from_slice(&parts)));
            }
        }
        None
    }
}

impl Scope for Notation<'_> {
    fn name(&self, name: &str) -> Option<RatExpr> {
        if let Some(e) = self.defs.get(name) {
            return Some(e.clone());
        }
        self.symbol(name).map(|c| RatExpr::var(Indet::Inv(c)))
    }

    fn call(&self, func: &str, args: &[RatExpr]) -> Option<Result<RatExpr>> {
        let i: usize = func.strip_prefix('D')?.parse().ok()?;
        let m = self.names.indep.len();
        if args.len() != 1 || i == 0 || i > m {
            return None;
        }
        let vars = args[0].vars();
        if let (1, Some(Indet::Inv(c))) = (vars.len(), vars.iter().next()) {
            if args[0] == RatExpr::var(Indet::Inv(*c)) {
                return Some(Ok(RatExpr::var(Indet::mono(*c, MultiIndex::unit(m, i)))));
            }
        }
        Some(self.rw?.formal_derive(i, &args[0]))
    }
}

/// Largest `|β|` over monotone symbols in `e`; ι-symbols count as 0.
pub fn derivation_order(e: &RatExpr) -> u32 {
    e.vars()
        .iter()
        .map(|v| match v {
            Indet::Mono(_, b) => b.order(),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}
