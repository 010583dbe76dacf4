//! Resource caps guarding the exponential parts of the library.

use crate::error::{Error, Result};

/// Limits on shape-table sizes and exhaustive scans.
///
/// Override through the `TREEPOLY_CAPS` environment variable, a comma
/// separated list of `key=value` pairs, e.g. `max_shapes=200000,max_scan=1e8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `|RB_U(m)|` for which a density matrix or polytope is built.
    pub max_shapes: u128,
    /// Largest `C(m, n)` handled by the exhaustive subset scan; above it
    /// pattern counting switches to the dynamic program.
    pub max_scan: u128,
}

pub const ENV_VAR: &str = "TREEPOLY_CAPS";

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_shapes: 100_000,
            max_scan: 10_000_000,
        }
    }
}

impl Caps {
    pub fn from_env() -> Result<Caps> {
        match std::env::var(ENV_VAR) {
            Ok(text) => Caps::parse(&text),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("{ENV_VAR}: expected key=value, got {item:?}")))?;
            let value = parse_count(value.trim())
                .ok_or_else(|| Error::domain(format!("{ENV_VAR}: bad number {value:?}")))?;
            match key.trim() {
                "max_shapes" => caps.max_shapes = value,
                "max_scan" => caps.max_scan = value,
                other => return Err(Error::domain(format!("{ENV_VAR}: unknown key {other:?}"))),
            }
        }
        Ok(caps)
    }

    pub fn check_shapes(&self, count: u128) -> Result<()> {
        if count > self.max_shapes {
            return Err(Error::CapExceeded {
                what: "shape count",
                value: count,
                limit: self.max_shapes,
            });
        }
        Ok(())
    }
}

// Accepts plain integers and `1e7`-style powers of ten.
fn parse_count(s: &str) -> Option<u128> {
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let mant: u128 = mant.parse().ok()?;
        let exp: u32 = exp.parse().ok()?;
        return mant.checked_mul(10u128.checked_pow(exp)?);
    }
    s.replace('_', "").parse().ok()
}
