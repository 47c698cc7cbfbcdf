use std::fmt;

/// Whether a variable is one of the two phase variables or a coefficient symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Phase,
    Coefficient,
}

/// A polynomial variable. Phase variables sort before every coefficient symbol,
/// and coefficient symbols sort by their declaration index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub kind: VarKind,
    pub index: u32,
}

impl VarId {
    pub const X: VarId = VarId { kind: VarKind::Phase, index: 0 };
    pub const Y: VarId = VarId { kind: VarKind::Phase, index: 1 };

    pub const fn coeff(index: u32) -> VarId {
        VarId { kind: VarKind::Coefficient, index }
    }

    pub fn is_phase(self) -> bool {
        self.kind == VarKind::Phase
    }

    /// Dense position in the fixed variable order (x, y, then coefficient symbols).
    pub(crate) fn code(self) -> u32 {
        match self.kind {
            VarKind::Phase => self.index,
            VarKind::Coefficient => 2 + self.index,
        }
    }

    pub(crate) fn from_code(code: u32) -> VarId {
        if code < 2 {
            VarId { kind: VarKind::Phase, index: code }
        } else {
            VarId::coeff(code - 2)
        }
    }
}

/// Names for the coefficient symbols of one polynomial ring. Phase variables are
/// always `x` and `y`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
}

impl Symbols {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Symbols {
        Symbols { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Appends a new coefficient symbol and returns its id.
    pub fn push(&mut self, name: impl Into<String>) -> VarId {
        self.names.push(name.into());
        VarId::coeff(self.names.len() as u32 - 1)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.names.len() as u32).map(VarId::coeff)
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        match name {
            "x" => Some(VarId::X),
            "y" => Some(VarId::Y),
            _ => self.names.iter().position(|n| n == name).map(|i| VarId::coeff(i as u32)),
        }
    }

    pub fn name(&self, v: VarId) -> &str {
        match v.kind {
            VarKind::Phase => {
                if v.index == 0 {
                    "x"
                } else {
                    "y"
                }
            }
            VarKind::Coefficient => self.names.get(v.index as usize).map(String::as_str).unwrap_or("?"),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Phase => write!(f, "{}", if self.index == 0 { "x" } else { "y" }),
            VarKind::Coefficient => write!(f, "s{}", self.index),
        }
    }
}
