use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::AlgebraError;

/// Number of unknowns: `h1..h9` plus the auxiliary `h10`.
pub const NVARS: usize = 10;

/// A power product `h1^e1 * ... * h10^e10`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u8; NVARS],
    degree: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; NVARS],
        degree: 0,
    };

    /// The variable `h{index+1}`.
    pub fn var(index: usize) -> Monomial {
        let mut exps = [0; NVARS];
        exps[index] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Monomial, AlgebraError> {
        if exps.len() != NVARS {
            return Err(AlgebraError::Parse(format!(
                "expected {NVARS} exponents, got {}",
                exps.len()
            )));
        }
        let mut out = [0u8; NVARS];
        for (o, &e) in out.iter_mut().zip(exps) {
            *o = u8::try_from(e).map_err(|_| AlgebraError::ExponentOverflow)?;
        }
        Ok(Monomial::from_array(out))
    }

    pub fn from_array(exps: [u8; NVARS]) -> Monomial {
        let degree = exps.iter().map(|&e| e as u16).sum();
        Monomial { exps, degree }
    }

    /// Product of variables given by index, with repetition.
    pub fn product(vars: &[usize]) -> Monomial {
        let mut exps = [0u8; NVARS];
        for &v in vars {
            exps[v] += 1;
        }
        Monomial::from_array(exps)
    }

    #[inline]
    pub fn exponents(&self) -> &[u8; NVARS] {
        &self.exps
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u8 {
        self.exps[var]
    }

    #[inline]
    pub fn degree(&self) -> u16 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, &o) in exps.iter_mut().zip(&other.exps) {
            *e = e.checked_add(o).expect("monomial exponent overflow");
        }
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// True when `self` divides `other`.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut exps = self.exps;
        for (e, &o) in exps.iter_mut().zip(&other.exps) {
            *e -= o;
        }
        Some(Monomial {
            exps,
            degree: self.degree - other.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, &o) in exps.iter_mut().zip(&other.exps) {
            *e = (*e).max(o);
        }
        Monomial::from_array(exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "h{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GrevLex,
}

/// A monomial order: a kind plus a ranking of the variables, largest first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    /// `ranking[r]` is the variable index holding rank `r`.
    ranking: [usize; NVARS],
}

/// Variable ranking `h2 > h3 > h8 > h9 > h7 > h1 > h4 > h5 > h6 > h10`:
/// the six variables that end up linear in the reduced basis rank above
/// the four that stay quadratic. Among orders of this kind it keeps the
/// basis shrinking with `N` and is about as fragile under noise as the
/// original solver.
pub const DEFAULT_RANKING: [usize; NVARS] = [1, 2, 7, 8, 6, 0, 3, 4, 5, 9];

/// `h1 > h2 > ... > h10`.
pub const NATURAL_RANKING: [usize; NVARS] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];

impl MonomialOrder {
    pub fn new(kind: OrderKind, ranking: [usize; NVARS]) -> Result<MonomialOrder, AlgebraError> {
        let mut seen = [false; NVARS];
        for &v in &ranking {
            if v >= NVARS || seen[v] {
                return Err(AlgebraError::Parse(format!(
                    "variable ranking {ranking:?} is not a permutation"
                )));
            }
            seen[v] = true;
        }
        Ok(MonomialOrder { kind, ranking })
    }

    pub fn grevlex() -> MonomialOrder {
        MonomialOrder {
            kind: OrderKind::GrevLex,
            ranking: DEFAULT_RANKING,
        }
    }

    pub fn lex() -> MonomialOrder {
        MonomialOrder {
            kind: OrderKind::Lex,
            ranking: DEFAULT_RANKING,
        }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn ranking(&self) -> &[usize; NVARS] {
        &self.ranking
    }

    /// An integer whose natural order is this monomial order. Injective.
    #[inline]
    pub fn key(&self, m: &Monomial) -> u128 {
        let e = &m.exps;
        let mut k: u128 = 0;
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.ranking {
                    k = (k << 8) | e[v] as u128;
                }
            }
            OrderKind::GrevLex => {
                k = m.degree as u128;
                for &v in self.ranking.iter().rev() {
                    k = (k << 8) | (255 - e[v]) as u128;
                }
            }
        }
        k
    }

    #[inline]
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::grevlex()
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            OrderKind::Lex => "lex",
            OrderKind::GrevLex => "grevlex",
        };
        f.write_str(kind)?;
        for (r, v) in self.ranking.iter().enumerate() {
            f.write_str(if r == 0 { ":" } else { "," })?;
            write!(f, "h{}", v + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `lex`, `grevlex`, optionally followed by `:h1,h2,...` with all ten variables.
impl FromStr for MonomialOrder {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, vars) = match s.split_once(':') {
            Some((k, v)) => (k, Some(v)),
            None => (s, None),
        };
        let kind = match kind.trim() {
            "lex" => OrderKind::Lex,
            "grevlex" | "degrevlex" => OrderKind::GrevLex,
            other => return Err(AlgebraError::Parse(format!("unknown order {other:?}"))),
        };
        let ranking = match vars {
            None => DEFAULT_RANKING,
            Some(list) => {
                let parsed: Vec<usize> = list
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .strip_prefix('h')
                            .and_then(|n| n.parse::<usize>().ok())
                            .filter(|&n| (1..=NVARS).contains(&n))
                            .map(|n| n - 1)
                            .ok_or_else(|| AlgebraError::Parse(format!("bad variable {t:?}")))
                    })
                    .collect::<Result<_, _>>()?;
                parsed.try_into().map_err(|v: Vec<usize>| {
                    AlgebraError::Parse(format!("expected {NVARS} variables, got {}", v.len()))
                })?
            }
        };
        MonomialOrder::new(kind, ranking)
    }
}
