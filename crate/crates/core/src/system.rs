//! Planar polynomial systems `s(1, m1, ..., ml)`: signatures, coefficient layouts,
//! vector fields and the restriction to the center-focus variety.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::poly::{int, parse_rational, Poly, PolyError, Rational, Symbols, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("unknown coefficient `{name}` at byte {pos}")]
    UnknownCoefficient { name: String, pos: usize },
    #[error("coefficient `{name}` = {value} contradicts the center-focus variety")]
    VarietyConflict { name: String, value: String },
    #[error("system has no linear component")]
    NoLinearPart,
    #[error("invalid value for `{name}`: {msg}")]
    InvalidValue { name: String, msg: String },
    #[error("invalid system description: {0}")]
    Syntax(String),
}

impl From<PolyError> for SystemError {
    fn from(e: PolyError) -> Self {
        SystemError::Syntax(e.to_string())
    }
}

/// Degrees of the homogeneous components, strictly increasing and containing 1.
/// A leading 0 is admitted for the affine example `s(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    degrees: Vec<u32>,
}

impl Signature {
    pub fn new(degrees: Vec<u32>) -> Result<Signature, SystemError> {
        if degrees.is_empty() {
            return Err(SystemError::MalformedSignature("no degrees".into()));
        }
        if degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SystemError::MalformedSignature(
                "degrees must be sorted, distinct, with 1 present".into(),
            ));
        }
        if !degrees.contains(&1) {
            return Err(SystemError::MalformedSignature("the linear degree 1 must be present".into()));
        }
        if degrees[0] == 0 && degrees.get(1) != Some(&1) {
            return Err(SystemError::MalformedSignature("degree 0 is only admitted before 1".into()));
        }
        Ok(Signature { degrees })
    }

    pub fn s12() -> Signature {
        Signature { degrees: vec![1, 2] }
    }

    pub fn s123() -> Signature {
        Signature { degrees: vec![1, 2, 3] }
    }

    pub fn s01() -> Signature {
        Signature { degrees: vec![0, 1] }
    }

    /// Accepts `s(1,2,3)`, `(1,2,3)` or `1,2,3`.
    pub fn parse(text: &str) -> Result<Signature, SystemError> {
        let t = text.trim();
        let t = t.strip_prefix('s').unwrap_or(t).trim();
        let t = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t);
        let degrees = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| SystemError::MalformedSignature(format!("bad degree `{}`", p.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Signature::new(degrees)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Number of degrees besides the linear one (and besides a leading 0).
    pub fn ell(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn slot_count(&self) -> usize {
        self.degrees.iter().map(|&d| 2 * (d as usize + 1)).sum()
    }

    pub fn nonlinear_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.degrees.iter().copied().filter(|&d| d >= 2)
    }

    pub fn block_index(&self, degree: u32) -> Option<usize> {
        self.degrees.iter().position(|&d| d == degree)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        write!(f, "s({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    P,
    Q,
}

/// One coefficient slot: the system carries `prefactor * symbol * x^(d-position) y^position`
/// in `P` or `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffSymbol {
    pub component_degree: u32,
    pub side: Side,
    pub position: u32,
    pub display_name: String,
    pub prefactor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffValue {
    Symbolic,
    Value(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    pub p: Poly,
    pub q: Poly,
}

/// The four linear-part objects of the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearGenerators {
    pub i1: Poly,
    pub i2: Poly,
    pub k2: Poly,
}

pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

const S12_NAMES: [&str; 6] = ["g", "h", "k", "l", "m", "n"];
const S123_CUBIC: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

fn layout_names(sig: &Signature) -> Vec<(u32, Side, u32, String)> {
    let named_quadratic = sig.degrees == [1, 2] || sig.degrees == [1, 2, 3];
    let named_cubic = sig.degrees == [1, 2, 3];
    let mut out = Vec::new();
    for &d in &sig.degrees {
        for side in [Side::P, Side::Q] {
            for pos in 0..=d {
                let name = match d {
                    0 => (if side == Side::P { "a" } else { "b" }).to_string(),
                    1 => {
                        let i = (side == Side::Q) as usize * 2 + pos as usize;
                        ["c", "d", "e", "f"][i].to_string()
                    }
                    2 if named_quadratic => S12_NAMES[(side == Side::Q) as usize * 3 + pos as usize].to_string(),
                    3 if named_cubic => S123_CUBIC[(side == Side::Q) as usize * 4 + pos as usize].to_string(),
                    _ => format!("{}{}_{}", if side == Side::P { "p" } else { "q" }, d, pos),
                };
                out.push((d, side, pos, name));
            }
        }
    }
    out
}

/// A system with a coefficient table; every slot is either symbolic or a rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    signature: Signature,
    slots: Vec<CoeffSymbol>,
    values: Vec<CoeffValue>,
    symbols: Symbols,
}

/// The chart `{c = 0, d = 1, e = -1, f = 0}` of the center-focus variety.
pub const VARIETY_POINT: [(&str, i64); 4] = [("c", 0), ("d", 1), ("e", -1), ("f", 0)];

impl SystemSpec {
    /// Fully symbolic system with the named layout for `s(0,1)`, `s(1,2)`,
    /// `s(1,2,3)` and systematic names (`p3_0`, `q3_1`, ...) otherwise.
    pub fn build_generic(signature: Signature) -> SystemSpec {
        let mut slots = Vec::new();
        let mut symbols = Symbols::default();
        for (d, side, pos, name) in layout_names(&signature) {
            symbols.push(name.clone());
            slots.push(CoeffSymbol {
                component_degree: d,
                side,
                position: pos,
                display_name: name,
                prefactor: binomial(d, pos),
            });
        }
        let values = vec![CoeffValue::Symbolic; slots.len()];
        SystemSpec { signature, slots, values, symbols }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn slots(&self) -> &[CoeffSymbol] {
        &self.slots
    }

    pub fn values(&self) -> &[CoeffValue] {
        &self.values
    }

    pub fn slot_id(&self, name: &str) -> Option<VarId> {
        self.slots.iter().position(|s| s.display_name == name).map(|i| VarId::coeff(i as u32))
    }

    pub fn slot(&self, v: VarId) -> &CoeffSymbol {
        &self.slots[v.index as usize]
    }

    /// Coefficient symbols of one homogeneous component, in layout order.
    pub fn block(&self, degree: u32) -> Vec<VarId> {
        (0..self.slots.len())
            .filter(|&i| self.slots[i].component_degree == degree)
            .map(|i| VarId::coeff(i as u32))
            .collect()
    }

    /// Coefficient symbol groups, one per signature degree.
    pub fn blocks(&self) -> Vec<Vec<VarId>> {
        self.signature.degrees.iter().map(|&d| self.block(d)).collect()
    }

    pub fn value(&self, name: &str) -> Option<&CoeffValue> {
        self.slot_id(name).map(|v| &self.values[v.index as usize])
    }

    pub fn set(&mut self, name: &str, value: CoeffValue) -> Result<(), SystemError> {
        let v = self
            .slot_id(name)
            .ok_or_else(|| SystemError::UnknownCoefficient { name: name.to_string(), pos: 0 })?;
        self.values[v.index as usize] = value;
        Ok(())
    }

    pub fn is_fully_symbolic(&self) -> bool {
        self.values.iter().all(|v| *v == CoeffValue::Symbolic)
    }

    pub fn is_concrete(&self) -> bool {
        self.values.iter().all(|v| matches!(v, CoeffValue::Value(_)))
    }

    /// The value of a slot as a polynomial: its symbol when symbolic.
    pub fn coefficient_poly(&self, v: VarId) -> Poly {
        match &self.values[v.index as usize] {
            CoeffValue::Symbolic => Poly::var(v),
            CoeffValue::Value(r) => Poly::constant(r.clone()),
        }
    }

    /// Assignment of every concrete slot, for evaluating generic polynomials.
    pub fn assignment(&self) -> HashMap<VarId, Rational> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| match v {
                CoeffValue::Value(r) => Some((VarId::coeff(i as u32), r.clone())),
                CoeffValue::Symbolic => None,
            })
            .collect()
    }

    /// Homogeneous component of degree `degree` as `(P_d, Q_d)`.
    pub fn component(&self, degree: u32) -> (Poly, Poly) {
        let (mut p, mut q) = (Poly::zero(), Poly::zero());
        for (i, slot) in self.slots.iter().enumerate() {
            if slot.component_degree != degree {
                continue;
            }
            let mono = &Poly::x().pow(degree - slot.position) * &Poly::y().pow(slot.position);
            let term = (&self.coefficient_poly(VarId::coeff(i as u32)) * &mono)
                .scale(&int(slot.prefactor as i64));
            match slot.side {
                Side::P => p += term,
                Side::Q => q += term,
            }
        }
        (p, q)
    }

    pub fn vector_field(&self) -> VectorField {
        let (mut p, mut q) = (Poly::zero(), Poly::zero());
        for &d in &self.signature.degrees {
            let (pd, qd) = self.component(d);
            p += pd;
            q += qd;
        }
        VectorField { p, q }
    }

    /// Sets the linear part to the rotation chart of the center-focus variety.
    /// Concrete linear coefficients that disagree are reported, not overwritten.
    pub fn restrict_to_variety(&self) -> Result<SystemSpec, SystemError> {
        if self.signature.block_index(1).is_none() {
            return Err(SystemError::NoLinearPart);
        }
        let mut out = self.clone();
        for (name, val) in VARIETY_POINT {
            let target = int(val);
            match self.value(name) {
                Some(CoeffValue::Value(r)) if *r != target => {
                    return Err(SystemError::VarietyConflict { name: name.into(), value: r.to_string() });
                }
                _ => out.set(name, CoeffValue::Value(target))?,
            }
        }
        Ok(out)
    }

    pub fn is_on_variety(&self) -> bool {
        VARIETY_POINT
            .iter()
            .all(|(name, val)| self.value(name) == Some(&CoeffValue::Value(int(*val))))
    }

    fn linear_coeffs(&self) -> Result<[Poly; 4], SystemError> {
        let get = |n: &str| self.slot_id(n).map(|v| self.coefficient_poly(v)).ok_or(SystemError::NoLinearPart);
        Ok([get("c")?, get("d")?, get("e")?, get("f")?])
    }

    /// `i1 = c + f`, `i2 = c^2 + 2de + f^2`, `k2 = -e x^2 + (c - f) x y + d y^2`.
    pub fn linear_generators(&self) -> Result<LinearGenerators, SystemError> {
        let [c, d, e, f] = self.linear_coeffs()?;
        let i1 = &c + &f;
        let i2 = &(&(&c * &c) + &(&d * &e).scale(&int(2))) + &(&f * &f);
        let (x, y) = (Poly::x(), Poly::y());
        let k2 = &(&(-&(&e * &x.pow(2))) + &(&(&c - &f) * &(&x * &y))) + &(&d * &y.pow(2));
        Ok(LinearGenerators { i1, i2, k2 })
    }

    /// Classical discriminant of the binary quadratic `k2`, `(c - f)^2 + 4de`,
    /// and the invariant expression `2 i2 - i1^2`.
    pub fn discriminants(&self) -> Result<(Poly, Poly), SystemError> {
        let [c, d, e, f] = self.linear_coeffs()?;
        let cf = &c - &f;
        let classical = &(&cf * &cf) + &(&d * &e).scale(&int(4));
        let g = self.linear_generators()?;
        let invariant = &g.i2.scale(&int(2)) - &(&g.i1 * &g.i1);
        Ok((classical, invariant))
    }

    /// Substitutes concrete values into a polynomial written in this system's
    /// generic coefficient symbols.
    pub fn specialize(&self, p: &Poly) -> Poly {
        p.eval_partial(&self.assignment())
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly, PolyError> {
        Poly::parse(text, &self.symbols)
    }

    pub fn render(&self, p: &Poly) -> String {
        p.to_text(&self.symbols)
    }

    /// Inline shorthand `s(1,2); V; g=1,n=1/2`.
    ///
    /// `V` applies the variety restriction. When any assignment is present the
    /// system is concrete: unlisted nonlinear coefficients become 0. Without
    /// assignments every coefficient not fixed by `V` stays symbolic.
    pub fn parse_shorthand(text: &str) -> Result<SystemSpec, SystemError> {
        let mut parts = text.split(';');
        let sig = Signature::parse(parts.next().unwrap_or(""))?;
        let mut spec = SystemSpec::build_generic(sig);
        let mut variety = false;
        let mut assignments: Vec<(String, Rational, usize)> = Vec::new();
        let mut offset = text.find(';').map_or(text.len(), |i| i + 1);
        for part in parts {
            let t = part.trim();
            if t == "V" {
                variety = true;
            } else if !t.is_empty() {
                let mut local = offset;
                for item in part.split(',') {
                    let Some((name, val)) = item.split_once('=') else {
                        return Err(SystemError::Syntax(format!("expected name=value, got `{}`", item.trim())));
                    };
                    let name = name.trim();
                    let pos = local + item.find(name).unwrap_or(0);
                    if spec.slot_id(name).is_none() {
                        return Err(SystemError::UnknownCoefficient { name: name.into(), pos });
                    }
                    let r = parse_rational(val)
                        .map_err(|e| SystemError::InvalidValue { name: name.into(), msg: e.to_string() })?;
                    assignments.push((name.to_string(), r, pos));
                    local += item.len() + 1;
                }
            }
            offset += part.len() + 1;
        }
        if !assignments.is_empty() {
            for i in 0..spec.slots.len() {
                if spec.slots[i].component_degree != 1 {
                    spec.values[i] = CoeffValue::Value(Rational::zero());
                }
            }
        }
        for (name, r, _) in assignments {
            spec.set(&name, CoeffValue::Value(r))?;
        }
        if variety {
            spec = spec.restrict_to_variety()?;
        }
        Ok(spec)
    }

    /// JSON document `{"signature": [1,2], "coefficients": {"g": "1/2", "h": null}}`.
    /// Missing or `null` coefficients are symbolic; `"variety": true` applies `V`.
    pub fn from_json(text: &str) -> Result<SystemSpec, SystemError> {
        #[derive(Deserialize)]
        struct Doc {
            signature: Vec<u32>,
            #[serde(default)]
            coefficients: BTreeMap<String, Option<serde_json::Value>>,
            #[serde(default)]
            variety: bool,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| SystemError::Syntax(e.to_string()))?;
        let mut spec = SystemSpec::build_generic(Signature::new(doc.signature)?);
        for (name, value) in doc.coefficients {
            if spec.slot_id(&name).is_none() {
                return Err(SystemError::UnknownCoefficient { name, pos: 0 });
            }
            let v = match value {
                None => CoeffValue::Symbolic,
                Some(serde_json::Value::String(s)) => CoeffValue::Value(
                    parse_rational(&s).map_err(|e| SystemError::InvalidValue { name: name.clone(), msg: e.to_string() })?,
                ),
                Some(serde_json::Value::Number(n)) => CoeffValue::Value(
                    parse_rational(&n.to_string())
                        .map_err(|e| SystemError::InvalidValue { name: name.clone(), msg: e.to_string() })?,
                ),
                Some(other) => {
                    return Err(SystemError::InvalidValue { name, msg: format!("unsupported value {other}") })
                }
            };
            spec.set(&name, v)?;
        }
        if doc.variety {
            spec = spec.restrict_to_variety()?;
        }
        Ok(spec)
    }

    /// Replaces every symbolic slot with the given values; missing names stay symbolic.
    pub fn with_values(&self, values: &HashMap<String, Rational>) -> Result<SystemSpec, SystemError> {
        let mut out = self.clone();
        for (name, r) in values {
            if out.slot_id(name).is_none() {
                return Err(SystemError::UnknownCoefficient { name: name.clone(), pos: 0 });
            }
            out.set(name, CoeffValue::Value(r.clone()))?;
        }
        Ok(out)
    }

    /// Human-readable echo of the coefficient table.
    pub fn describe(&self) -> String {
        let mut parts = vec![self.signature.to_string()];
        for (slot, v) in self.slots.iter().zip(&self.values) {
            if let CoeffValue::Value(r) = v {
                parts.push(format!("{}={}", slot.display_name, r));
            }
        }
        parts.join("; ")
    }
}

impl VectorField {
    /// Applies the field as a derivation in the phase variables: `P dU/dx + Q dU/dy`.
    pub fn apply(&self, u: &Poly) -> Poly {
        &(&self.p * &u.derivative(VarId::X)) + &(&self.q * &u.derivative(VarId::Y))
    }
}

impl CoeffValue {
    pub fn is_one(&self) -> bool {
        matches!(self, CoeffValue::Value(r) if r.is_one())
    }
}
