use std::cmp::Ordering;
use std::fmt;

/// Largest supported number of independent variables.
pub const MAX_VARS: usize = 6;

/// An m-tuple of non-negative integers, stored inline.
///
/// Ordered graded-lexicographically: first by `|α|`, then lexicographically on
/// the components.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    len: u8,
    parts: [u8; MAX_VARS],
}

impl MultiIndex {
    pub fn zeros(m: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&m), "unsupported dimension {m}");
        MultiIndex { len: m as u8, parts: [0; MAX_VARS] }
    }

    /// `ε_i`, with `i` 1-based.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut out = Self::zeros(m);
        out.parts[i - 1] = 1;
        out
    }

    pub fn from_slice(parts: &[u32]) -> Self {
        let mut out = Self::zeros(parts.len());
        for (k, &p) in parts.iter().enumerate() {
            out.parts[k] = u8::try_from(p).expect("multi-index component too large");
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.len as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.parts[..self.len as usize]
    }

    /// Component `i`, 1-based.
    pub fn get(&self, i: usize) -> u32 {
        self.parts[i - 1] as u32
    }

    pub fn order(&self) -> u32 {
        self.as_slice().iter().map(|&p| p as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|&p| p == 0)
    }

    /// `α + ε_i`.
    pub fn add_unit(&self, i: usize) -> Self {
        let mut out = *self;
        out.parts[i - 1] = out.parts[i - 1].checked_add(1).expect("multi-index overflow");
        out
    }

    /// `α − ε_i`, or `None` when `α_i = 0`.
    pub fn sub_unit(&self, i: usize) -> Option<Self> {
        let mut out = *self;
        out.parts[i - 1] = out.parts[i - 1].checked_sub(1)?;
        Some(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        let mut out = *self;
        for k in 0..self.len as usize {
            out.parts[k] = out.parts[k].checked_add(other.parts[k]).expect("multi-index overflow");
        }
        out
    }

    /// `α − β`, or `None` if some component would go negative.
    pub fn sub(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.len, other.len);
        let mut out = *self;
        for k in 0..self.len as usize {
            out.parts[k] = out.parts[k].checked_sub(other.parts[k])?;
        }
        Some(out)
    }

    /// First non-zero position (1-based); `m+1` for the zero index.
    pub fn fs(&self) -> usize {
        self.as_slice().iter().position(|&p| p != 0).map_or(self.dim() + 1, |k| k + 1)
    }

    /// Last non-zero position (1-based); `0` for the zero index.
    pub fn ls(&self) -> usize {
        self.as_slice().iter().rposition(|&p| p != 0).map_or(0, |k| k + 1)
    }

    /// All multi-indices of dimension `m` and order exactly `k`, ascending.
    pub fn of_order(m: usize, k: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Self::zeros(m);
        fn rec(pos: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
            let m = cur.dim();
            if pos == m - 1 {
                cur.parts[pos] = left as u8;
                out.push(*cur);
                return;
            }
            for v in 0..=left {
                cur.parts[pos] = v as u8;
                rec(pos + 1, left - v, cur, out);
            }
        }
        rec(0, k, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All multi-indices of dimension `m` and order at most `k`, ascending.
    pub fn up_to_order(m: usize, k: u32) -> Vec<MultiIndex> {
        (0..=k).flat_map(|j| Self::of_order(m, j)).collect()
    }
}

impl MultiIndex {
    /// Packs `(len, |α|, components)` so that integer order is the index order.
    /// Unused components are zero, so the lexicographic tail is unaffected.
    fn sort_key(&self) -> u128 {
        let mut k = ((self.len as u128) << 64) | ((self.order() as u128) << 48);
        for (i, &p) in self.parts.iter().enumerate() {
            k |= (p as u128) << (40 - 8 * i);
        }
        k
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.as_slice().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A base coordinate of the jet space: an independent `x_i` or a jet
/// coordinate `u_{j,α}`. Indices are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Coord {
    X(u8),
    U(u8, MultiIndex),
}

impl Coord {
    pub fn x(i: usize) -> Self {
        Coord::X(i as u8)
    }

    pub fn u(dep: usize, alpha: MultiIndex) -> Self {
        Coord::U(dep as u8, alpha)
    }

    /// Jet order `|α|`, or `None` for an independent variable.
    pub fn jet_order(&self) -> Option<u32> {
        match self {
            Coord::X(_) => None,
            Coord::U(_, a) => Some(a.order()),
        }
    }
}

/// Short inline parameter name, compared as a string.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamName {
    len: u8,
    bytes: [u8; 15],
}

impl ParamName {
    pub fn new(name: &str) -> Option<Self> {
        if name.len() > 15 {
            return None;
        }
        let mut bytes = [0u8; 15];
        bytes[..name.len()].copy_from_slice(name.as_bytes());
        Some(ParamName { len: name.len() as u8, bytes })
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bytes[..self.len as usize]).expect("ascii name")
    }
}

impl fmt::Debug for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An indeterminate of the polynomial rings.
///
/// The derived order is the canonical one: parameters, then independents,
/// then jet coordinates by `(dep, |α|, lex α)`, then ι-symbols, then
/// monotone-derivative symbols by `(base, |β|, lex β)`.
///
/// `Mono(c, 0)` never occurs: construct through [`Indet::mono`], which maps
/// it to `Inv(c)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Indet {
    Param(ParamName),
    Coord(Coord),
    Inv(Coord),
    Mono(Coord, MultiIndex),
}

impl Indet {
    pub fn x(i: usize) -> Self {
        Indet::Coord(Coord::x(i))
    }

    pub fn u(dep: usize, alpha: MultiIndex) -> Self {
        Indet::Coord(Coord::u(dep, alpha))
    }

    pub fn mono(base: Coord, beta: MultiIndex) -> Self {
        if beta.is_zero() {
            Indet::Inv(base)
        } else {
            Indet::Mono(base, beta)
        }
    }

    /// The coordinate underlying a coordinate, ι-symbol or monotone symbol.
    pub fn base(&self) -> Option<Coord> {
        match self {
            Indet::Param(_) => None,
            Indet::Coord(c) | Indet::Inv(c) | Indet::Mono(c, _) => Some(*c),
        }
    }

    /// Derivation index `β` of a monotone symbol; zero for ι-symbols.
    pub fn mono_parts(&self, m: usize) -> Option<(Coord, MultiIndex)> {
        match self {
            Indet::Inv(c) => Some((*c, MultiIndex::zeros(m))),
            Indet::Mono(c, b) => Some((*c, *b)),
            _ => None,
        }
    }
}
