//! Domain description files: one domain per TOML document.
//!
//! ```toml
//! kind = "ellipse"
//! a = 2.0
//! b = 1.0
//! rotate = 0.6283185307179586   # optional, radians
//! scale = 1.7                   # optional, > 0
//! origin = 0.0                  # optional, arc-length shift of the base point
//! ```
//!
//! `kind = "support"` takes `c0`, `cos = [...]` and `sin = [...]` (harmonics
//! `k = 1, 2, ...`); `kind = "circle"` takes `r`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConvexDomain, DomainKind};
use crate::error::{BilliardError, Result};

fn unit() -> f64 {
    1.0
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: DomainKind,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub rotate: f64,
    #[serde(default = "unit", skip_serializing_if = "is_one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub origin: f64,
}

impl DomainSpec {
    pub fn new(shape: DomainKind) -> Self {
        Self { shape, rotate: 0.0, scale: 1.0, origin: 0.0 }
    }

    pub fn build(&self) -> Result<ConvexDomain> {
        Ok(ConvexDomain::from_kind(&self.shape)?
            .scaled(self.scale)?
            .rotated(self.rotate)
            .with_origin_shift(self.origin))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| BilliardError::DomainFile(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| BilliardError::DomainFile(e.to_string()))
    }
}

pub fn read_domain_file(path: impl AsRef<Path>) -> Result<DomainSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| BilliardError::DomainFile(format!("{}: {e}", path.display())))?;
    DomainSpec::from_toml(&text)
}

pub fn write_domain_file(path: impl AsRef<Path>, spec: &DomainSpec) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, spec.to_toml()?)
        .map_err(|e| BilliardError::DomainFile(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SupportFunction;
    use proptest::prelude::*;

    #[test]
    fn parses_each_kind() {
        let c = DomainSpec::from_toml("kind = \"circle\"\nr = 2.5\n").unwrap();
        assert_eq!(c.shape, DomainKind::Circle { r: 2.5 });
        assert_eq!(c.scale, 1.0);
        let e = DomainSpec::from_toml("kind = \"ellipse\"\na = 2.0\nb = 1.0\nrotate = 0.5\nscale = 1.7\n")
            .unwrap();
        assert_eq!(e.shape, DomainKind::Ellipse { a: 2.0, b: 1.0 });
        assert_eq!((e.rotate, e.scale), (0.5, 1.7));
        let s = DomainSpec::from_toml("kind = \"support\"\nc0 = 1.0\ncos = [0.0, 0.0, 0.05]\n").unwrap();
        assert_eq!(
            s.shape,
            DomainKind::Support(SupportFunction::new(1.0, vec![0.0, 0.0, 0.05], vec![]))
        );
        assert!(s.build().is_ok());
    }

    #[test]
    fn rejects_unknown_kind_and_bad_scale() {
        assert!(DomainSpec::from_toml("kind = \"square\"\nside = 1.0\n").is_err());
        let bad = DomainSpec::from_toml("kind = \"circle\"\nr = 1.0\nscale = -2.0\n").unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn domain_spec_reproduces_domain() {
        let d = ConvexDomain::ellipse(2.0, 1.0).unwrap().scaled(1.7).unwrap().rotated(0.3).with_origin_shift(0.9);
        let rebuilt = d.spec().build().unwrap();
        for i in 0..10 {
            let s = 0.77 * i as f64;
            let (p, q) = (d.position(s), rebuilt.position(s));
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }

    fn arb_spec() -> impl Strategy<Value = DomainSpec> {
        let shape = prop_oneof![
            (0.01f64..100.0).prop_map(|r| DomainKind::Circle { r }),
            (0.01f64..10.0, 0.01f64..1.0).prop_map(|(a, f)| DomainKind::Ellipse { a, b: a * f }),
            (
                0.1f64..10.0,
                proptest::collection::vec(-1.0f64..1.0, 0..6),
                proptest::collection::vec(-1.0f64..1.0, 0..6)
            )
                .prop_map(|(c0, cos, sin)| DomainKind::Support(SupportFunction::new(c0, cos, sin))),
        ];
        (shape, -10.0f64..10.0, 0.001f64..1000.0, 0.0f64..50.0).prop_map(
            |(shape, rotate, scale, origin)| DomainSpec { shape, rotate, scale, origin },
        )
    }

    proptest! {
        #[test]
        fn toml_round_trip_is_bit_exact(spec in arb_spec()) {
            let text = spec.to_toml().unwrap();
            let back = DomainSpec::from_toml(&text).unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}
