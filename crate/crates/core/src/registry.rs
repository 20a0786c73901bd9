//! Variable registries.
//!
//! Every polynomial is tied to an ordered list of named real variables. A
//! complex coordinate is a declared (real part, imaginary part) pair; holomorphic
//! maps use a separate registry of complex symbols.

use std::sync::Arc;

use crate::poly::PolyError;

/// Registries pack one 8-bit exponent per variable into a `u128`.
pub const MAX_VARS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRole {
    RealPart { coord: usize },
    ImagPart { coord: usize },
    AbstractReal,
    /// A holomorphic coordinate symbol (no conjugate exists in its registry).
    ComplexSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexCoord {
    pub name: String,
    pub re: usize,
    pub im: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRegistry {
    names: Vec<String>,
    roles: Vec<VarRole>,
    coords: Vec<ComplexCoord>,
}

impl VarRegistry {
    pub fn builder() -> RegistryBuilder {
        RegistryBuilder::default()
    }

    /// Registry of abstract real variables.
    pub fn reals<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, PolyError> {
        let mut b = Self::builder();
        for n in names {
            b = b.real(n.as_ref());
        }
        b.build()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn role(&self, idx: usize) -> VarRole {
        self.roles[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn try_index_of(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn coords(&self) -> &[ComplexCoord] {
        &self.coords
    }

    pub fn coord(&self, name: &str) -> Option<&ComplexCoord> {
        self.coords.iter().find(|c| c.name == name)
    }

    pub fn try_coord(&self, name: &str) -> Result<&ComplexCoord, PolyError> {
        self.coord(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }
}

#[derive(Debug, Default)]
pub struct RegistryBuilder {
    names: Vec<String>,
    roles: Vec<VarRole>,
    coords: Vec<ComplexCoord>,
}

impl RegistryBuilder {
    pub fn real(mut self, name: &str) -> Self {
        self.names.push(name.to_string());
        self.roles.push(VarRole::AbstractReal);
        self
    }

    pub fn symbol(mut self, name: &str) -> Self {
        self.names.push(name.to_string());
        self.roles.push(VarRole::ComplexSymbol);
        self
    }

    /// Declares a complex coordinate `name = re_name + i·im_name`.
    pub fn complex(mut self, name: &str, re_name: &str, im_name: &str) -> Self {
        let coord = self.coords.len();
        let re = self.names.len();
        self.names.push(re_name.to_string());
        self.roles.push(VarRole::RealPart { coord });
        self.names.push(im_name.to_string());
        self.roles.push(VarRole::ImagPart { coord });
        self.coords.push(ComplexCoord {
            name: name.to_string(),
            re,
            im: re + 1,
        });
        self
    }

    pub fn build(self) -> Result<Arc<VarRegistry>, PolyError> {
        if self.names.len() > MAX_VARS {
            return Err(PolyError::RegistryTooLarge {
                vars: self.names.len(),
                max: MAX_VARS,
            });
        }
        for (i, n) in self.names.iter().enumerate() {
            if self.names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        for (i, c) in self.coords.iter().enumerate() {
            if self.coords[..i].iter().any(|d| d.name == c.name) {
                return Err(PolyError::DuplicateVariable(c.name.clone()));
            }
        }
        Ok(Arc::new(VarRegistry {
            names: self.names,
            roles: self.roles,
            coords: self.coords,
        }))
    }
}
