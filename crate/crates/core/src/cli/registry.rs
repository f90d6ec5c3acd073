use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::physconst::DEBYE;
use crate::spectrum::MoleculeSpec;
use crate::{Error, Result};

const BUNDLED: &str = include_str!("../../data/molecules.json");

/// One registry entry, stored with the unit-bearing field names of the
/// file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeRecord {
    pub name: String,
    pub p_debye: f64,
    #[serde(rename = "J_kgm2")]
    pub j_kgm2: f64,
    pub l_m: f64,
}

impl MoleculeRecord {
    pub fn spec(&self) -> MoleculeSpec {
        MoleculeSpec {
            name: self.name.clone(),
            dipole: self.p_debye * DEBYE,
            inertia: self.j_kgm2,
            length: self.l_m,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Registry("molecule with empty `name`".into()));
        }
        for (field, value) in [
            ("p_debye", self.p_debye),
            ("J_kgm2", self.j_kgm2),
            ("l_m", self.l_m),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Registry(format!(
                    "molecule `{}`: field `{field}` must be positive, got {value}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    molecules: Vec<MoleculeRecord>,
}

/// Molecule records keyed by unique, case-sensitive name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MoleculeRegistry {
    records: Vec<MoleculeRecord>,
}

impl MoleculeRegistry {
    pub fn new(records: Vec<MoleculeRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &records {
            r.validate()?;
            if !seen.insert(r.name.as_str()) {
                return Err(Error::Registry(format!(
                    "duplicate molecule name `{}`",
                    r.name
                )));
            }
        }
        Ok(MoleculeRegistry { records })
    }

    /// The registry shipped with the crate (HCl only).
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled registry is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RegistryFile = serde_json::from_str(text).map_err(|e| {
            Error::Registry(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Self::new(file.molecules)
    }

    pub fn to_json(&self) -> String {
        let file = RegistryFile {
            molecules: self.records.clone(),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("records serialize");
        text.push('\n');
        text
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|source| Error::Io {
            context: format!("writing {}", path.display()),
            source,
        })
    }

    pub fn insert(&mut self, record: MoleculeRecord) -> Result<()> {
        record.validate()?;
        if self.records.iter().any(|r| r.name == record.name) {
            return Err(Error::Registry(format!(
                "duplicate molecule name `{}`",
                record.name
            )));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn record(&self, name: &str) -> Option<&MoleculeRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn get(&self, name: &str) -> Result<MoleculeSpec> {
        self.record(name)
            .map(MoleculeRecord::spec)
            .ok_or_else(|| Error::UnknownMolecule(name.to_string()))
    }

    pub fn records(&self) -> &[MoleculeRecord] {
        &self.records
    }
}

pub fn load_registry(path: &Path) -> Result<MoleculeRegistry> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading {}", path.display()),
        source,
    })?;
    MoleculeRegistry::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_has_hcl() {
        let reg = MoleculeRegistry::bundled();
        let hcl = reg.get("HCl").unwrap();
        assert_eq!(hcl.inertia, 2.5e-47);
        assert_eq!(hcl.length, 0.128e-9);
        assert_eq!(hcl.dipole, DEBYE);
        assert!(reg.get("hcl").is_err());
    }

    #[test]
    fn duplicate_rejected() {
        let text = r#"{"molecules": [
            {"name": "HCl", "p_debye": 1.0, "J_kgm2": 2.5e-47, "l_m": 1.28e-10},
            {"name": "HCl", "p_debye": 1.1, "J_kgm2": 2.5e-47, "l_m": 1.28e-10}
        ]}"#;
        let err = MoleculeRegistry::from_json(text).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let mut reg = MoleculeRegistry::bundled();
        assert!(reg.insert(reg.records()[0].clone()).is_err());
    }

    #[test]
    fn parse_error_reports_position() {
        let err = MoleculeRegistry::from_json("{\"molecules\": [\n  {\"name\": }\n]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn invariant_violation_names_field() {
        let text =
            r#"{"molecules": [{"name": "X", "p_debye": 1.0, "J_kgm2": -1.0, "l_m": 1e-10}]}"#;
        let err = MoleculeRegistry::from_json(text).unwrap_err();
        assert!(err.to_string().contains("J_kgm2"), "{err}");
        let unknown = r#"{"molecules": [{"name": "X", "p": 1.0, "J_kgm2": 1.0, "l_m": 1e-10}]}"#;
        assert!(MoleculeRegistry::from_json(unknown).is_err());
    }

    #[test]
    fn write_then_load_is_bit_exact() {
        let mut reg = MoleculeRegistry::bundled();
        reg.insert(MoleculeRecord {
            name: "custom".into(),
            p_debye: 0.1 + 0.2,
            j_kgm2: 1.234_567_890_123_456_7e-46,
            l_m: std::f64::consts::PI * 1e-10,
        })
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reg.json");
        reg.save(&path).unwrap();
        let back = load_registry(&path).unwrap();
        assert_eq!(back, reg);
        for (a, b) in back.records().iter().zip(reg.records()) {
            assert_eq!(a.p_debye.to_bits(), b.p_debye.to_bits());
            assert_eq!(a.j_kgm2.to_bits(), b.j_kgm2.to_bits());
            assert_eq!(a.l_m.to_bits(), b.l_m.to_bits());
        }
    }

    proptest::proptest! {
        #[test]
        fn any_positive_values_round_trip(
            p in 1e-6f64..1e3,
            j in 1e-50f64..1e-40,
            l in 1e-12f64..1e-8,
        ) {
            let reg = MoleculeRegistry::new(vec![MoleculeRecord {
                name: "m".into(),
                p_debye: p,
                j_kgm2: j,
                l_m: l,
            }])
            .unwrap();
            let back = MoleculeRegistry::from_json(&reg.to_json()).unwrap();
            let r = &back.records()[0];
            proptest::prop_assert_eq!(r.p_debye.to_bits(), p.to_bits());
            proptest::prop_assert_eq!(r.j_kgm2.to_bits(), j.to_bits());
            proptest::prop_assert_eq!(r.l_m.to_bits(), l.to_bits());
        }
    }
}
