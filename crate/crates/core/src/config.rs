use crate::error::{FlabError, Result};

/// Enumeration bounds. Everything in this crate materializes element sets,
/// so these caps keep the exhaustive scans at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest group order for closure and subgroup scans.
    pub max_order: usize,
    /// Largest group order for automorphism searches.
    pub max_aut_order: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_order: 10_000,
            max_aut_order: 512,
        }
    }
}

impl Bounds {
    /// Defaults, overridden by `FLAB_MAX_ORDER` when set.
    pub fn from_env() -> Self {
        let mut b = Bounds::default();
        if let Ok(v) = std::env::var("FLAB_MAX_ORDER") {
            if let Ok(n) = v.trim().parse::<usize>() {
                b.max_order = n;
                b.max_aut_order = n;
            }
        }
        b
    }

    pub fn check_order(&self, what: &str, order: usize) -> Result<()> {
        if order > self.max_order {
            return Err(FlabError::Resource {
                what: what.to_string(),
                order,
                bound: self.max_order,
            });
        }
        Ok(())
    }

    pub fn check_aut_order(&self, what: &str, order: usize) -> Result<()> {
        if order > self.max_aut_order {
            return Err(FlabError::Resource {
                what: what.to_string(),
                order,
                bound: self.max_aut_order,
            });
        }
        Ok(())
    }
}
