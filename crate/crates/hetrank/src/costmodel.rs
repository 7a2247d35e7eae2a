//! Bill-of-materials, power and cost comparison of the receiver front-ends.
//!
//! Component counting rules (IQ sampling needs 2 mixers and 2 ADCs per
//! RF chain):
//! - every architecture uses one LNA per antenna;
//! - `Hybrid`: K shared chains, so 2K mixers and 2K ADCs;
//! - `Proposed`: the ADCs stay shared (2K), while per-antenna down-conversion
//!   brings the mixer count to that of the fully digital front-end, 2N;
//! - `FullyDigital`: one chain per antenna, 2N mixers and 2N ADCs.

use thiserror::Error;

/// Default catalog shipped with the library; users may override it from a
/// file with the same layout.
pub const DEFAULT_CATALOG: &str = include_str!("../data/catalog.kv");

/// ADC sample rate assumed in the complexity comparison (samples/s).
pub const DEFAULT_ADC_SAMPLE_RATE: f64 = 500e6;
/// ADC resolution assumed in the complexity comparison (bits).
pub const DEFAULT_ADC_RESOLUTION_BITS: u32 = 12;

/// Receiver front-end variants being compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Hybrid,
    Proposed,
    FullyDigital,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [
        Architecture::Hybrid,
        Architecture::Proposed,
        Architecture::FullyDigital,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Architecture::Hybrid => "hybrid",
            Architecture::Proposed => "proposed",
            Architecture::FullyDigital => "fully-digital",
        }
    }
}

/// One catalog entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec {
    pub name: String,
    pub unit_cost_eur: f64,
    pub unit_power_w: f64,
}

/// The three component classes every architecture is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub mixer: ComponentSpec,
    pub adc: ComponentSpec,
    pub lna: ComponentSpec,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("catalog line {0}: expected 'key = value'")]
    Syntax(usize),
    #[error("catalog line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("catalog line {line}: '{key}' needs a non-negative number")]
    BadNumber { line: usize, key: String },
    #[error("catalog is missing the {0} entry")]
    MissingComponent(&'static str),
}

impl Catalog {
    /// Parses the flat `class.field = value` catalog format.
    ///
    /// Recognised classes are `mixer`, `adc` and `lna`, each with `name`,
    /// `unit_cost_eur` and `unit_power_w` fields. Blank lines and `#`
    /// comments are ignored. Every class must be fully specified.
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        #[derive(Default)]
        struct Partial {
            name: Option<String>,
            cost: Option<f64>,
            power: Option<f64>,
        }
        let mut entries: [Partial; 3] = Default::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(CatalogError::Syntax(line_no))?;
            let key = key.trim();
            let value = value.trim();
            let (class, field) = key
                .split_once('.')
                .ok_or_else(|| CatalogError::UnknownKey {
                    line: line_no,
                    key: key.to_string(),
                })?;
            let slot = match class {
                "mixer" => &mut entries[0],
                "adc" => &mut entries[1],
                "lna" => &mut entries[2],
                _ => {
                    return Err(CatalogError::UnknownKey {
                        line: line_no,
                        key: key.to_string(),
                    })
                }
            };
            let parse_number = || {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| *v >= 0.0 && v.is_finite())
                    .ok_or_else(|| CatalogError::BadNumber {
                        line: line_no,
                        key: key.to_string(),
                    })
            };
            match field {
                "name" => slot.name = Some(value.to_string()),
                "unit_cost_eur" => slot.cost = Some(parse_number()?),
                "unit_power_w" => slot.power = Some(parse_number()?),
                _ => {
                    return Err(CatalogError::UnknownKey {
                        line: line_no,
                        key: key.to_string(),
                    })
                }
            }
        }
        let build = |slot: &Partial, label: &'static str| -> Result<ComponentSpec, CatalogError> {
            Ok(ComponentSpec {
                name: slot
                    .name
                    .clone()
                    .ok_or(CatalogError::MissingComponent(label))?,
                unit_cost_eur: slot.cost.ok_or(CatalogError::MissingComponent(label))?,
                unit_power_w: slot.power.ok_or(CatalogError::MissingComponent(label))?,
            })
        };
        Ok(Catalog {
            mixer: build(&entries[0], "mixer")?,
            adc: build(&entries[1], "adc")?,
            lna: build(&entries[2], "lna")?,
        })
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::parse(DEFAULT_CATALOG).expect("embedded catalog parses")
    }
}

/// Component counts of one architecture instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArchitectureBom {
    pub architecture: Architecture,
    pub n_antennas: usize,
    pub n_rf_chains: usize,
    pub mixers: usize,
    pub adcs: usize,
    pub lnas: usize,
}

/// Counts the components needed for `architecture` with `n_antennas`
/// antennas and `n_chains` RF chains.
pub fn bom(architecture: Architecture, n_antennas: usize, n_chains: usize) -> ArchitectureBom {
    debug_assert!(n_antennas >= 1 && n_chains >= 1);
    let (mixers, adcs) = match architecture {
        Architecture::Hybrid => (2 * n_chains, 2 * n_chains),
        Architecture::Proposed => (2 * n_antennas, 2 * n_chains),
        Architecture::FullyDigital => (2 * n_antennas, 2 * n_antennas),
    };
    ArchitectureBom {
        architecture,
        n_antennas,
        n_rf_chains: n_chains,
        mixers,
        adcs,
        lnas: n_antennas,
    }
}

/// Per-class and total figures; used for both watts and euros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakdown {
    pub mixers: f64,
    pub adcs: f64,
    pub lnas: f64,
    pub total: f64,
}

fn breakdown(bom: &ArchitectureBom, mixer: f64, adc: f64, lna: f64) -> Breakdown {
    let mixers = bom.mixers as f64 * mixer;
    let adcs = bom.adcs as f64 * adc;
    let lnas = bom.lnas as f64 * lna;
    Breakdown {
        mixers,
        adcs,
        lnas,
        total: mixers + adcs + lnas,
    }
}

/// Power draw in watts, per class and total.
pub fn power_table(bom: &ArchitectureBom, catalog: &Catalog) -> Breakdown {
    breakdown(
        bom,
        catalog.mixer.unit_power_w,
        catalog.adc.unit_power_w,
        catalog.lna.unit_power_w,
    )
}

/// Component cost in euros, per class and total.
pub fn cost_table(bom: &ArchitectureBom, catalog: &Catalog) -> Breakdown {
    breakdown(
        bom,
        catalog.mixer.unit_cost_eur,
        catalog.adc.unit_cost_eur,
        catalog.lna.unit_cost_eur,
    )
}

/// Aggregate sample stream the baseband must process, in bits per second.
pub fn adc_datarate(n_adcs: usize, sample_rate: f64, resolution_bits: u32) -> f64 {
    n_adcs as f64 * sample_rate * resolution_bits as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_counts_for_reference_system() {
        let hybrid = bom(Architecture::Hybrid, 32, 2);
        assert_eq!((hybrid.mixers, hybrid.adcs, hybrid.lnas), (4, 4, 32));
        let proposed = bom(Architecture::Proposed, 32, 2);
        assert_eq!((proposed.mixers, proposed.adcs, proposed.lnas), (64, 4, 32));
        let digital = bom(Architecture::FullyDigital, 32, 2);
        assert_eq!((digital.mixers, digital.adcs, digital.lnas), (64, 64, 32));
    }

    #[test]
    fn structural_relations_hold_for_any_size() {
        for n in [1usize, 8, 32, 64, 128] {
            for k in [1usize, 2, 3, 4] {
                let hybrid = bom(Architecture::Hybrid, n, k);
                let proposed = bom(Architecture::Proposed, n, k);
                let digital = bom(Architecture::FullyDigital, n, k);
                assert_eq!(proposed.adcs, hybrid.adcs);
                assert_eq!(proposed.mixers, digital.mixers);
                assert_eq!(proposed.lnas, n);
            }
        }
    }

    #[test]
    fn power_totals_match_reference_tables() {
        let catalog = Catalog::default();
        let power = |arch| power_table(&bom(arch, 32, 2), &catalog);
        // Printed totals round the LNA class to 10 W, so allow 0.05 W.
        assert!((power(Architecture::Hybrid).total - 14.26).abs() < 0.05);
        assert!((power(Architecture::Proposed).total - 18.1).abs() < 0.05);
        assert!((power(Architecture::FullyDigital).total - 78.1).abs() < 0.05);
        assert!((power(Architecture::Hybrid).mixers - 0.256).abs() < 1e-12);
        assert!((power(Architecture::Proposed).mixers - 4.096).abs() < 1e-12);
        assert!((power(Architecture::FullyDigital).adcs - 64.0).abs() < 1e-12);
    }

    #[test]
    fn cost_totals_match_reference_tables() {
        let catalog = Catalog::default();
        let cost = |arch| cost_table(&bom(arch, 32, 2), &catalog);
        let hybrid = cost(Architecture::Hybrid);
        assert!((hybrid.mixers - 122.64).abs() < 1e-9);
        assert!((hybrid.adcs - 610.44).abs() < 1e-9);
        assert!((hybrid.lnas - 1069.76).abs() < 1e-9);
        assert!((hybrid.total - 1802.84).abs() < 1e-9);
        assert!((cost(Architecture::Proposed).total - 3642.44).abs() < 1e-9);
        // The per-class products sum to 12799.04 even though the printed
        // grand total is 12799.00.
        let digital = cost(Architecture::FullyDigital);
        assert!((digital.mixers - 1962.24).abs() < 1e-9);
        assert!((digital.adcs - 9767.04).abs() < 1e-9);
        assert!((digital.total - 12799.04).abs() < 1e-9);
    }

    #[test]
    fn totals_are_linear_in_counts() {
        let catalog = Catalog::default();
        let small = bom(Architecture::FullyDigital, 16, 2);
        let big = bom(Architecture::FullyDigital, 32, 4);
        assert_eq!(big.mixers, 2 * small.mixers);
        assert_eq!(big.adcs, 2 * small.adcs);
        let c_small = cost_table(&small, &catalog);
        let c_big = cost_table(&big, &catalog);
        assert!((c_big.total - 2.0 * c_small.total).abs() < 1e-9);
        let p_small = power_table(&small, &catalog);
        let p_big = power_table(&big, &catalog);
        assert!((p_big.total - 2.0 * p_small.total).abs() < 1e-9);
    }

    #[test]
    fn adc_datarate_examples() {
        assert_eq!(adc_datarate(4, 500e6, 12), 24e9);
        assert_eq!(adc_datarate(64, 500e6, 12), 384e9);
        assert_eq!(adc_datarate(1, 1.0, 1), 1.0);
    }

    #[test]
    fn catalog_parser_rejects_bad_input() {
        assert!(matches!(
            Catalog::parse("mixer.name MDB"),
            Err(CatalogError::Syntax(1))
        ));
        assert!(matches!(
            Catalog::parse("mixer.price = 3"),
            Err(CatalogError::UnknownKey { .. })
        ));
        assert!(matches!(
            Catalog::parse("mixer.unit_cost_eur = -4"),
            Err(CatalogError::BadNumber { .. })
        ));
        assert_eq!(
            Catalog::parse("mixer.name = X\nmixer.unit_cost_eur = 1\nmixer.unit_power_w = 1"),
            Err(CatalogError::MissingComponent("adc"))
        );
    }

    #[test]
    fn catalog_override_round_trips() {
        let text = "\
            mixer.name = M\nmixer.unit_cost_eur = 1.5\nmixer.unit_power_w = 0.1\n\
            adc.name = A\nadc.unit_cost_eur = 2.5 # pricey\nadc.unit_power_w = 0.2\n\
            lna.name = L\nlna.unit_cost_eur = 3.5\nlna.unit_power_w = 0.3\n";
        let catalog = Catalog::parse(text).unwrap();
        assert_eq!(catalog.adc.unit_cost_eur, 2.5);
        let table = cost_table(&bom(Architecture::Hybrid, 4, 1), &catalog);
        assert!((table.total - (2.0 * 1.5 + 2.0 * 2.5 + 4.0 * 3.5)).abs() < 1e-12);
    }
}
