//! The line-oriented action specification format.
//!
//! ```text
//! independent x
//! dependent u
//! param eps = -1
//! generator v1 = [x | 0]
//! generator v2 = [1 | 0]
//! cross_section order 1
//!   x -> 0
//!   u[1] -> 1
//! ```

use std::collections::HashMap;

use crate::action::{Action, Generator, DEFAULT_MAX_ORDER};
use crate::error::{Error, Result};
use crate::frame::{CrossSection, CsRule, Frame};
use crate::jets::JetContext;
use crate::kernel::{Names, RatExpr, Q};
use crate::parse::{Parser, Scope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpecFile {
    pub names: Names,
    pub params: Vec<(String, Q)>,
    pub generators: Vec<Generator>,
    pub rules: Vec<CsRule>,
    pub order: u32,
}

impl ActionSpecFile {
    pub fn ctx(&self) -> JetContext {
        JetContext::new(self.names.clone())
    }

    pub fn action(&self, max_order: u32) -> Result<Action> {
        Ok(Action::new(self.ctx(), self.generators.clone())?.with_max_order(max_order))
    }

    pub fn frame(&self) -> Result<Frame> {
        self.frame_with_max_order(DEFAULT_MAX_ORDER)
    }

    pub fn frame_with_max_order(&self, max_order: u32) -> Result<Frame> {
        Frame::new(self.action(max_order)?, CrossSection::new(self.rules.clone()))
    }
}

struct ParamScope<'a>(&'a HashMap<String, Q>);

impl Scope for ParamScope<'_> {
    fn name(&self, name: &str) -> Option<RatExpr> {
        self.0.get(name).map(|q| RatExpr::constant(q.clone()))
    }
}

const RESERVED: &[&str] = &["I", "M", "independent", "dependent", "param", "generator", "cross_section", "order"];

pub fn parse_action_spec(text: &str) -> Result<ActionSpecFile> {
    let mut indep: Option<Vec<String>> = None;
    let mut dep: Option<Vec<String>> = None;
    let mut params: Vec<(String, Q)> = Vec::new();
    let mut pmap: HashMap<String, Q> = HashMap::new();
    let mut gens: Vec<Generator> = Vec::new();
    let mut order: Option<(u32, usize)> = None;
    let mut rules: Vec<CsRule> = Vec::new();
    let empty = Names::new(Vec::new(), Vec::new());

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let indented = body.starts_with(' ') || body.starts_with('\t');
        let names = match (&indep, &dep) {
            (Some(i), Some(d)) => Some(Names::new(i.clone(), d.clone())),
            _ => None,
        };
        let scope = ParamScope(&pmap);
        if indented {
            if order.is_none() {
                return Err(Error::Parse { line, col: 1, msg: "indented line outside a cross_section block".into() });
            }
            let names = names.as_ref().expect("cross_section requires declared variables");
            let mut p = Parser::new(body, line, 1, names, &scope)?;
            let coord = p.coord()?;
            let power = if p.eat('^') { p.uint()? } else { 1 };
            if power == 0 {
                return p.err("zero exponent on rule left-hand side");
            }
            p.expect_arrow()?;
            let rhs = p.expr()?;
            p.expect_end()?;
            rules.push(CsRule { coord, power, rhs });
            continue;
        }
        if order.is_some() {
            return Err(Error::Parse { line, col: 1, msg: "cross_section block must end the file".into() });
        }
        let mut p = Parser::new(body, line, 1, names.as_ref().unwrap_or(&empty), &scope)?;
        let kw = p.ident()?;
        match kw.as_str() {
            "independent" | "dependent" => {
                let slot = if kw == "independent" { &mut indep } else { &mut dep };
                if slot.is_some() {
                    return p.err(format!("`{kw}` declared twice"));
                }
                let mut list = Vec::new();
                while !p.at_end() {
                    let name = p.ident()?;
                    list.push(name);
                }
                if list.is_empty() {
                    return p.err(format!("`{kw}` needs at least one name"));
                }
                *slot = Some(list);
                let all: Vec<&String> = indep.iter().flatten().chain(dep.iter().flatten()).collect();
                for (k, a) in all.iter().enumerate() {
                    if RESERVED.contains(&a.as_str()) || pmap.contains_key(*a) || all[..k].contains(a) {
                        return Err(Error::Parse { line, col: 1, msg: format!("name `{a}` is reserved or duplicated") });
                    }
                }
                if indep.as_ref().is_some_and(|v| v.len() > crate::kernel::MAX_VARS) {
                    return Err(Error::Parse { line, col: 1, msg: "too many independent variables".into() });
                }
            }
            "param" => {
                let name = p.ident()?;
                p.expect('=')?;
                let value = p.expr()?;
                p.expect_end()?;
                let taken = indep.iter().flatten().chain(dep.iter().flatten()).any(|n| *n == name);
                if taken || pmap.contains_key(&name) || RESERVED.contains(&name.as_str()) {
                    return Err(Error::Parse { line, col: 1, msg: format!("name `{name}` is reserved or duplicated") });
                }
                let Some(q) = value.constant_value() else {
                    return Err(Error::Parse { line, col: 1, msg: format!("parameter `{name}` must be a rational constant") });
                };
                pmap.insert(name.clone(), q.clone());
                params.push((name, q));
            }
            "generator" => {
                let Some(names) = names.as_ref() else {
                    return p.err("declare independent and dependent variables before generators");
                };
                let name = p.ident()?;
                p.expect('=')?;
                p.expect('[')?;
                let mut xi = vec![p.expr()?];
                while p.eat(',') {
                    xi.push(p.expr()?);
                }
                p.expect('|')?;
                let mut eta = vec![p.expr()?];
                while p.eat(',') {
                    eta.push(p.expr()?);
                }
                p.expect(']')?;
                p.expect_end()?;
                if xi.len() != names.indep.len() || eta.len() != names.dep.len() {
                    return Err(Error::ArityMismatch(format!(
                        "line {line}: generator {name} has {}|{} components, expected {}|{}",
                        xi.len(),
                        eta.len(),
                        names.indep.len(),
                        names.dep.len()
                    )));
                }
                gens.push(Generator { name, xi, eta });
            }
            "cross_section" => {
                if names.is_none() {
                    return p.err("declare independent and dependent variables before the cross-section");
                }
                let kw2 = p.ident()?;
                if kw2 != "order" {
                    return p.err("expected `order`");
                }
                let k = p.uint()?;
                p.expect_end()?;
                order = Some((k, line));
            }
            other => {
                return Err(Error::Parse { line, col: 1, msg: format!("unknown directive `{other}`") });
            }
        }
    }

    let (Some(indep), Some(dep)) = (indep, dep) else {
        return Err(Error::Parse { line: 1, col: 1, msg: "missing independent or dependent declaration".into() });
    };
    let Some((order, oline)) = order else {
        return Err(Error::Parse { line: text.lines().count().max(1), col: 1, msg: "missing cross_section block".into() });
    };
    if gens.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: "no generators".into() });
    }
    if gens.len() != rules.len() {
        return Err(Error::ArityMismatch(format!("{} generators but {} cross-section rules", gens.len(), rules.len())));
    }
    let actual = rules.iter().map(|r| r.coord.jet_order().unwrap_or(0)).max().unwrap_or(0);
    if actual != order {
        return Err(Error::Parse {
            line: oline,
            col: 1,
            msg: format!("declared order {order} but rules have order {actual}"),
        });
    }
    Ok(ActionSpecFile { names: Names::new(indep, dep), params, generators: gens, rules, order })
}
