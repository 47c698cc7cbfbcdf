//! Hilbert series in cyclotomic-factored form `N(v) / prod (1 - v^a)^m`,
//! Krull dimension as the order of the pole at 1, coefficient-wise comparison
//! and the Krull bound for the comitant algebra of a system.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::poly::{Monomial, Poly, PolyError, Rational, Symbols, VarId};
use crate::system::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("numerator is identically zero")]
    ZeroNumerator,
    #[error("operation needs a series in one variable, this one has {0}")]
    NotSingleVariable(usize),
    #[error("denominator factor must have a nonconstant monomial and multiplicity >= 1")]
    InvalidFactor,
    #[error("substitution makes the denominator vanish identically")]
    VanishingDenominator,
    #[error("coefficients are not integers")]
    NonIntegral,
    #[error("series has no variable named {0}")]
    UnknownVariable(String),
    #[error("unknown algebra {0}")]
    UnknownAlgebra(String),
    #[error("bad series file: {0}")]
    File(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One factor `(1 - v^e)^m` of a denominator, `e` an exponent vector over the
/// series variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenominatorFactor {
    pub exponents: Vec<u32>,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    symbols: Symbols,
    numerator: Poly,
    factors: Vec<DenominatorFactor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KrullDim(pub u32);

impl fmt::Display for KrullDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOrder {
    Equal,
    LessEq,
    GreaterEq,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Specialization {
    /// `u = 0`: from comitants to invariants.
    Invariants,
    /// Every variable set to one common variable.
    Common,
}

#[derive(Deserialize)]
struct SeriesFile {
    numerator: String,
    denominator: Vec<(u32, u32)>,
    #[serde(default)]
    variable: Option<String>,
}

fn var_poly(i: usize) -> Poly {
    Poly::var(VarId::coeff(i as u32))
}

fn monomial_of(exponents: &[u32]) -> Monomial {
    Monomial::from_pairs(exponents.iter().enumerate().map(|(i, &e)| (VarId::coeff(i as u32), e)))
}

/// `1 + v^a + v^2a + ... + v^(b-a)`, that is `(1 - v^b) / (1 - v^a)`.
fn geometric(a: u32, b: u32) -> Poly {
    Poly::from_terms((0..b / a).map(|i| (Monomial::var(VarId::coeff(0), i * a), Rational::one())))
}

impl HilbertSeries {
    /// General constructor; the numerator must only use the given variables.
    pub fn new(symbols: Symbols, numerator: Poly, factors: Vec<DenominatorFactor>) -> Result<HilbertSeries, HilbertError> {
        if numerator.is_zero() {
            return Err(HilbertError::ZeroNumerator);
        }
        let n = symbols.len();
        if numerator.variables().iter().any(|v| v.is_phase() || v.index as usize >= n) {
            return Err(HilbertError::UnknownVariable("numerator".into()));
        }
        for f in &factors {
            if f.exponents.len() != n || f.exponents.iter().all(|&e| e == 0) || f.multiplicity == 0 {
                return Err(HilbertError::InvalidFactor);
            }
        }
        Ok(HilbertSeries { symbols, numerator, factors }.normalized())
    }

    /// Series in one variable with denominator `prod (1 - v^a)^m` for `(a, m)`.
    pub fn univariate(variable: &str, numerator: Poly, denominator: &[(u32, u32)]) -> Result<HilbertSeries, HilbertError> {
        let factors = denominator
            .iter()
            .map(|&(a, m)| DenominatorFactor { exponents: vec![a], multiplicity: m })
            .collect();
        HilbertSeries::new(Symbols::new([variable]), numerator, factors)
    }

    pub fn parse_univariate(variable: &str, numerator: &str, denominator: &[(u32, u32)]) -> Result<HilbertSeries, HilbertError> {
        let num = Poly::parse(numerator, &Symbols::new([variable]))?;
        HilbertSeries::univariate(variable, num, denominator)
    }

    /// Reads `{"numerator": "1 - u + u^2", "denominator": [[1,2],[2,1]]}`; the
    /// variable is the optional `"variable"` field, else the only letter used.
    pub fn from_json(text: &str) -> Result<HilbertSeries, HilbertError> {
        let file: SeriesFile = serde_json::from_str(text).map_err(|e| HilbertError::File(e.to_string()))?;
        let variable = match file.variable {
            Some(v) => v,
            None => {
                let mut letters: Vec<char> = file.numerator.chars().filter(|c| c.is_ascii_alphabetic()).collect();
                letters.dedup();
                letters.sort_unstable();
                letters.dedup();
                match letters.as_slice() {
                    [] => "t".to_string(),
                    [c] => c.to_string(),
                    _ => return Err(HilbertError::File("numerator uses several variables".into())),
                }
            }
        };
        HilbertSeries::parse_univariate(&variable, &file.numerator, &file.denominator)
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn factors(&self) -> &[DenominatorFactor] {
        &self.factors
    }

    pub fn variable_count(&self) -> usize {
        self.symbols.len()
    }

    /// `(a, m)` pairs of a series in one variable.
    pub fn univariate_factors(&self) -> Result<Vec<(u32, u32)>, HilbertError> {
        self.require_single()?;
        Ok(self.factors.iter().map(|f| (f.exponents[0], f.multiplicity)).collect())
    }

    fn require_single(&self) -> Result<(), HilbertError> {
        match self.variable_count() {
            1 => Ok(()),
            n => Err(HilbertError::NotSingleVariable(n)),
        }
    }

    /// Merges repeated factors and sorts them.
    fn normalized(mut self) -> HilbertSeries {
        let mut merged: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for f in self.factors.drain(..) {
            *merged.entry(f.exponents).or_default() += f.multiplicity;
        }
        self.factors = merged
            .into_iter()
            .map(|(exponents, multiplicity)| DenominatorFactor { exponents, multiplicity })
            .collect();
        self
    }

    /// Numerator coefficients of a series in one variable, lowest degree first.
    pub fn numerator_coefficients(&self) -> Result<Vec<Rational>, HilbertError> {
        self.require_single()?;
        let v = VarId::coeff(0);
        let deg = self.numerator.degree_in(v);
        Ok((0..=deg).map(|i| self.numerator.coefficient(&Monomial::var(v, i))).collect())
    }

    /// Order of the pole at 1: every `(1 - v^a)^m` contributes `m`, and each
    /// factor `1 - v` dividing the numerator takes one away.
    pub fn krull_dimension(&self) -> Result<KrullDim, HilbertError> {
        let mut coeffs = self.numerator_coefficients()?;
        let poles: u32 = self.factors.iter().map(|f| f.multiplicity).sum();
        let mut order = 0u32;
        // Synthetic division by (v - 1) as long as the value at 1 is zero.
        while coeffs.len() > 1 && coeffs.iter().fold(Rational::zero(), |s, c| s + c).is_zero() {
            let n = coeffs.len() - 1;
            let mut quot = vec![Rational::zero(); n];
            let mut carry = Rational::zero();
            for i in (1..=n).rev() {
                carry += &coeffs[i];
                quot[i - 1] = carry.clone();
            }
            coeffs = quot;
            order += 1;
        }
        Ok(KrullDim(poles.saturating_sub(order)))
    }

    /// Power-series coefficients up to `v^n`.
    pub fn expand(&self, n: usize) -> Result<Vec<BigInt>, HilbertError> {
        let num = self.numerator_coefficients()?;
        let mut c: Vec<BigInt> = (0..=n)
            .map(|i| match num.get(i) {
                Some(r) if r.is_integer() => Ok(r.to_integer()),
                Some(_) => Err(HilbertError::NonIntegral),
                None => Ok(BigInt::zero()),
            })
            .collect::<Result<_, _>>()?;
        for f in &self.factors {
            let a = f.exponents[0] as usize;
            for _ in 0..f.multiplicity {
                for i in a..=n {
                    let prev = c[i - a].clone();
                    c[i] += prev;
                }
            }
        }
        Ok(c)
    }

    /// Coefficient-wise comparison up to `v^n`.
    pub fn compare(&self, other: &HilbertSeries, n: usize) -> Result<SeriesOrder, HilbertError> {
        let a = self.expand(n)?;
        let b = other.expand(n)?;
        let le = a.iter().zip(&b).all(|(x, y)| x <= y);
        let ge = a.iter().zip(&b).all(|(x, y)| x >= y);
        Ok(match (le, ge) {
            (true, true) => SeriesOrder::Equal,
            (true, false) => SeriesOrder::LessEq,
            (false, true) => SeriesOrder::GreaterEq,
            (false, false) => SeriesOrder::Incomparable,
        })
    }

    /// Whether the series is bounded by `c / (1 - v)^m` coefficient-wise up to
    /// `v^n`; such a bound caps the Krull dimension at `m`.
    pub fn envelope_check(&self, c: &Rational, m: u32, n: usize) -> Result<bool, HilbertError> {
        let coeffs = self.expand(n)?;
        let mut bound = BigInt::one();
        for (i, a) in coeffs.iter().enumerate() {
            // bound = binomial(i + m - 1, m - 1)
            if i > 0 {
                bound = if m == 0 { BigInt::zero() } else { bound * BigInt::from(i + m as usize - 1) / BigInt::from(i) };
            } else if m == 0 {
                bound = BigInt::one();
            }
            if Rational::from_integer(a.clone()) > c * Rational::from_integer(bound.clone()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Substitutes `u = 0` (the first variable) or sends every variable to one
    /// common variable, then cancels cyclotomic pieces where it can.
    pub fn specialize(&self, mode: Specialization) -> Result<HilbertSeries, HilbertError> {
        match mode {
            Specialization::Invariants => {
                if self.variable_count() < 2 {
                    return Err(HilbertError::UnknownVariable("u".into()));
                }
                let u = VarId::coeff(0);
                let mut bind = HashMap::new();
                bind.insert(u, Rational::zero());
                let numerator = self.numerator.eval_partial(&bind);
                let rename: HashMap<VarId, Poly> =
                    (1..self.variable_count()).map(|i| (VarId::coeff(i as u32), var_poly(i - 1))).collect();
                let numerator = numerator.substitute(&rename);
                let mut factors = Vec::new();
                for f in &self.factors {
                    if f.exponents[0] > 0 {
                        continue;
                    }
                    factors.push(DenominatorFactor { exponents: f.exponents[1..].to_vec(), multiplicity: f.multiplicity });
                }
                let names = self.symbols.names()[1..].to_vec();
                if numerator.is_zero() {
                    return Err(HilbertError::ZeroNumerator);
                }
                HilbertSeries::new(Symbols::new(names), numerator, factors)
            }
            Specialization::Common => {
                let t = var_poly(0);
                let rename: HashMap<VarId, Poly> = (0..self.variable_count()).map(|i| (VarId::coeff(i as u32), t.clone())).collect();
                let numerator = self.numerator.substitute(&rename);
                let factors = self
                    .factors
                    .iter()
                    .map(|f| DenominatorFactor { exponents: vec![f.exponents.iter().sum()], multiplicity: f.multiplicity })
                    .collect();
                let name = self.symbols.names()[0].clone();
                Ok(HilbertSeries::new(Symbols::new([name]), numerator, factors)?.simplified())
            }
        }
    }

    /// Greedy cancellation of `(1 - v^b) / (1 - v^a)` for `a | b` against the
    /// numerator, in one variable.
    pub fn simplified(&self) -> HilbertSeries {
        if self.variable_count() != 1 {
            return self.clone();
        }
        let mut out = self.clone();
        'outer: loop {
            for idx in 0..out.factors.len() {
                let b = out.factors[idx].exponents[0];
                for a in (1..b).rev().filter(|a| b % a == 0) {
                    if let Ok(q) = out.numerator.divide_exact(&geometric(a, b)) {
                        out.numerator = q;
                        out.factors[idx].multiplicity -= 1;
                        out.factors.push(DenominatorFactor { exponents: vec![a], multiplicity: 1 });
                        out.factors.retain(|f| f.multiplicity > 0);
                        out = out.normalized();
                        continue 'outer;
                    }
                }
            }
            break;
        }
        out
    }

    /// Text form, e.g. `(1 - u + u^2)/((1 - u)^2*(1 - u^2))`.
    pub fn to_text(&self) -> String {
        let num = ascending_text(&self.numerator, &self.symbols);
        let mut den = Vec::new();
        for f in &self.factors {
            let mono = Poly::term(Rational::one(), monomial_of(&f.exponents)).to_text(&self.symbols);
            let base = format!("(1 - {mono})");
            den.push(if f.multiplicity == 1 { base } else { format!("{base}^{}", f.multiplicity) });
        }
        let num = if self.numerator.len() > 1 { format!("({num})") } else { num };
        if den.is_empty() {
            num
        } else {
            format!("{num}/({})", den.join("*"))
        }
    }
}

/// Terms from the lowest degree up, the usual way of writing these numerators.
fn ascending_text(p: &Poly, symbols: &Symbols) -> String {
    let mut out = String::new();
    let mut terms: Vec<(&Monomial, &Rational)> = p.iter().collect();
    terms.sort_by_key(|(m, _)| (m.degree(), std::cmp::Reverse((*m).clone())));
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let text = Poly::term(c.clone(), m.clone()).to_text(symbols);
        match (i, text.strip_prefix('-')) {
            (0, _) => out.push_str(&text),
            (_, Some(rest)) => out.push_str(&format!(" - {rest}")),
            (_, None) => out.push_str(&format!(" + {text}")),
        }
    }
    out
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn generalized(names: &[&str], numerator: &str, factors: &[(&[u32], u32)]) -> HilbertSeries {
    let symbols = Symbols::new(names.iter().copied());
    let numerator = Poly::parse(numerator, &symbols).expect("fixture numerator");
    let factors = factors
        .iter()
        .map(|&(e, m)| DenominatorFactor { exponents: e.to_vec(), multiplicity: m })
        .collect();
    HilbertSeries::new(symbols, numerator, factors).expect("fixture series")
}

/// Generalized series of the comitants of the system with constant and
/// linear part, graded by `u` (phase degree) and `z0`, `z1` (blocks).
pub fn generalized_s01() -> HilbertSeries {
    generalized(
        &["u", "z0", "z1"],
        "1 + u*z0*z1",
        &[(&[1, 1, 0], 1), (&[0, 0, 1], 1), (&[0, 0, 2], 1), (&[0, 2, 1], 1), (&[2, 0, 1], 1)],
    )
}

/// Generalized series of its invariants.
pub fn generalized_si01() -> HilbertSeries {
    generalized(&["z0", "z1"], "1", &[(&[0, 1], 1), (&[0, 2], 1), (&[2, 1], 1)])
}

/// Common series of the comitants of `s(0,1)`.
pub fn common_s01() -> HilbertSeries {
    HilbertSeries::parse_univariate("u", "1 - u + u^2", &[(1, 2), (2, 1), (3, 2)]).expect("fixture series")
}

/// Common series of the invariants of `s(0,1)`.
pub fn common_si01() -> HilbertSeries {
    HilbertSeries::parse_univariate("z", "1", &[(1, 1), (2, 1), (3, 1)]).expect("fixture series")
}

/// Built-in series by name: `S01`, `SI01` (common) or `S01-gen`, `SI01-gen`.
pub fn builtin(name: &str) -> Result<HilbertSeries, HilbertError> {
    match name {
        "S01" => Ok(common_s01()),
        "SI01" => Ok(common_si01()),
        "S01-gen" => Ok(generalized_s01()),
        "SI01-gen" => Ok(generalized_si01()),
        _ => Err(HilbertError::UnknownAlgebra(name.to_string())),
    }
}

/// Upper bound `2(sum m_i + l) + 1` on the Krull dimension of the comitant
/// algebra; it is one less than the number of coefficients plus phase pair.
pub fn rho_bound(signature: &Signature) -> u32 {
    let sum: u32 = signature.degrees().iter().sum();
    let ell = signature.degrees().len() as u32 - 1;
    2 * (sum + ell) + 1
}

/// Known Krull dimension `krull` and size of an integer algebraic basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceEntry {
    pub krull: u32,
    pub integer_basis: Option<u32>,
}

pub fn reference_table() -> BTreeMap<&'static str, ReferenceEntry> {
    let e = |krull, integer_basis| ReferenceEntry { krull, integer_basis };
    BTreeMap::from([
        ("SI_2", e(3, Some(3))),
        ("SI_3", e(5, Some(5))),
        ("SI_4", e(7, Some(9))),
        ("S_{0,1}", e(5, Some(5))),
        ("SI_{0,1}", e(3, Some(3))),
        ("SI_{1,2}", e(7, Some(7))),
        ("SI_{1,2,3}", e(15, Some(21))),
        ("S_{1,2}", e(9, None)),
    ])
}

pub fn reference(name: &str) -> Result<ReferenceEntry, HilbertError> {
    reference_table().get(name).copied().ok_or_else(|| HilbertError::UnknownAlgebra(name.to_string()))
}
