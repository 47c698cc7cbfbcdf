use std::cmp::Ordering;

use super::var::VarId;

/// A power product stored sparsely as `(variable code, exponent)` pairs sorted by
/// code, with no zero exponents.
///
/// Ordering is graded reverse-lexicographic over the fixed variable order
/// `x > y > s0 > s1 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId, exp: u32) -> Monomial {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial { exps: vec![(v.code(), exp)] }
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Monomial {
        let mut exps: Vec<(u32, u32)> = Vec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            exps.push((v.code(), e));
        }
        exps.sort_unstable_by_key(|p| p.0);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(exps.len());
        for (c, e) in exps {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += e,
                _ => merged.push((c, e)),
            }
        }
        Monomial { exps: merged }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        let code = v.code();
        self.exps
            .binary_search_by_key(&code, |p| p.0)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    /// Variables with their (non-zero) exponents, in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps.iter().map(|&(c, e)| (VarId::from_code(c), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(c, e) in &self.exps {
            if j < other.exps.len() && other.exps[j].0 < c {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == c {
                let oe = other.exps[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((c, e - oe)),
                }
            } else {
                out.push((c, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps: out })
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial { exps: self.exps.iter().map(|&(c, e)| (c, e * n)).collect() }
    }

    /// Removes `v` from the monomial, returning its former exponent.
    pub fn without(&self, v: VarId) -> (Monomial, u32) {
        let code = v.code();
        match self.exps.binary_search_by_key(&code, |p| p.0) {
            Ok(i) => {
                let mut exps = self.exps.clone();
                let (_, e) = exps.remove(i);
                (Monomial { exps }, e)
            }
            Err(_) => (self.clone(), 0),
        }
    }

    /// Degree restricted to a set of variables.
    pub fn degree_in(&self, vars: &[VarId]) -> u32 {
        self.iter().filter(|(v, _)| vars.contains(v)).map(|(_, e)| e).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (da, db) = (self.degree(), other.degree());
        if da != db {
            return da.cmp(&db);
        }
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (ca, ea) = a[i - 1];
            let (cb, eb) = b[j - 1];
            if ca == cb {
                if ea != eb {
                    // smaller power of the trailing variable wins
                    return eb.cmp(&ea);
                }
                i -= 1;
                j -= 1;
            } else if ca > cb {
                return Ordering::Less;
            } else {
                return Ordering::Greater;
            }
        }
        match (i, j) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
