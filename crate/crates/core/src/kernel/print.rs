use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::indet::{Coord, Indet};
use super::poly::{Poly, Q};
use super::ratexpr::RatExpr;

/// Display names of the independent and dependent variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Names {
    pub indep: Vec<String>,
    pub dep: Vec<String>,
}

impl Names {
    pub fn new(indep: Vec<String>, dep: Vec<String>) -> Self {
        Names { indep, dep }
    }

    /// `x1..xm` and `u` (or `u1..un`).
    pub fn default_for(m: usize, n: usize) -> Self {
        let indep = (1..=m).map(|i| format!("x{i}")).collect();
        let dep = if n == 1 { vec!["u".to_string()] } else { (1..=n).map(|j| format!("u{j}")).collect() };
        Names { indep, dep }
    }

    pub fn coord(&self, c: &Coord) -> String {
        match c {
            Coord::X(i) => self.indep[*i as usize].clone(),
            Coord::U(j, a) => format!("{}[{}]", self.dep[*j as usize], a),
        }
    }

    pub fn indet(&self, v: &Indet) -> String {
        match v {
            Indet::Param(p) => p.as_str().to_string(),
            Indet::Coord(c) => self.coord(c),
            Indet::Inv(c) => format!("I({})", self.coord(c)),
            Indet::Mono(c, b) => format!("M({};{})", self.coord(c), b),
        }
    }

    pub fn poly(&self, p: &Poly) -> String {
        let mut s = String::new();
        self.write_poly(&mut s, p).expect("string write");
        s
    }

    pub fn expr(&self, e: &RatExpr) -> String {
        let mut s = String::new();
        self.write_expr(&mut s, e).expect("string write");
        s
    }

    pub fn write_expr(&self, w: &mut impl Write, e: &RatExpr) -> fmt::Result {
        if e.den().is_one() {
            return self.write_poly(w, e.num());
        }
        if e.num().len() > 1 {
            w.write_char('(')?;
            self.write_poly(w, e.num())?;
            w.write_char(')')?;
        } else {
            self.write_poly(w, e.num())?;
        }
        w.write_str(" / ")?;
        self.write_den(w, e.den())
    }

    /// Parenthesized unless a single power of one variable.
    fn write_den(&self, w: &mut impl Write, p: &Poly) -> fmt::Result {
        let bare = p.len() == 1 && p.terms()[0].0.pairs().len() == 1;
        if !bare {
            w.write_char('(')?;
            self.write_poly(w, p)?;
            w.write_char(')')
        } else {
            self.write_poly(w, p)
        }
    }

    pub fn write_poly(&self, w: &mut impl Write, p: &Poly) -> fmt::Result {
        if p.is_zero() {
            return w.write_char('0');
        }
        for (k, (m, c)) in p.terms().iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    w.write_char('-')?;
                }
            } else {
                w.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if m.is_one() {
                write_q(w, &a)?;
                continue;
            }
            if !a.is_one() {
                write_q(w, &a)?;
                w.write_char('*')?;
            }
            for (j, (v, e)) in m.pairs().iter().enumerate() {
                if j > 0 {
                    w.write_char('*')?;
                }
                w.write_str(&self.indet(v))?;
                if *e > 1 {
                    write!(w, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

fn write_q(w: &mut impl Write, q: &Q) -> fmt::Result {
    if q.is_integer() {
        write!(w, "{}", q.numer())
    } else {
        write!(w, "{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::indet::MultiIndex;
    use crate::kernel::poly::q_frac;

    #[test]
    fn canonical_text() {
        let names = Names::new(vec!["x".into()], vec!["u".into()]);
        let i2 = RatExpr::var(Indet::Inv(Coord::u(0, MultiIndex::from_slice(&[2]))));
        assert_eq!(names.expr(&-i2.clone()), "-I(u[2])");
        assert_eq!(names.expr(&RatExpr::zero()), "0");
        let x = RatExpr::var(Indet::x(0));
        let e = (&x + &RatExpr::constant(q_frac(1, 2))).div(&(&i2 * &x)).unwrap();
        assert_eq!(names.expr(&e), "(x + 1/2) / (I(u[2])*x)");
        let m = Indet::mono(Coord::u(0, MultiIndex::from_slice(&[2])), MultiIndex::from_slice(&[1]));
        assert_eq!(names.indet(&m), "M(u[2];1)");
    }
}
