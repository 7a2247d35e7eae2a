//! The five subcommand implementations. Each returns the text to print.

use hetrank::analytics::{max_rate, throughput_estimate};
use hetrank::costmodel::{
    adc_datarate, bom, cost_table, power_table, Architecture, Catalog, DEFAULT_ADC_RESOLUTION_BITS,
    DEFAULT_ADC_SAMPLE_RATE,
};
use hetrank::scheduler::run_simulation;
use hetrank::signaling::{
    decode_abcap_list, decode_bwp_tradchain, decode_dci_ext, encode_abcap_list,
    encode_bwp_tradchain, encode_dci_ext, tradcap_options, AbCap, BwpTradchain, DciHetExt,
    DmrsConfig,
};
use hetrank::{Mode, SystemConfig};
use rayon::prelude::*;

use crate::experiment::ExperimentSpec;
use crate::CliError;

pub const SIMULATE_HEADER: &str = "mode,lambda,num_users,seed,aggregate_rate,mean_user_rate,\
analog_fraction,analog_no_data_fraction,unused_fraction";

/// Runs the rayon closure on a pool capped by `HETRANK_THREADS`, when set.
fn with_sweep_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match std::env::var("HETRANK_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(f()),
        Err(e) => Err(CliError::Config(format!("HETRANK_THREADS: {e}"))),
        Ok(raw) => {
            let threads: usize = raw.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
                CliError::Config(format!(
                    "HETRANK_THREADS must be a positive integer, got '{raw}'"
                ))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// One CSV row per `(mode, lambda, num_users, repetition)`, pre-sorted.
pub fn cmd_simulate(spec: &ExperimentSpec) -> Result<String, CliError> {
    spec.validate()?;
    let mut jobs: Vec<(Mode, f64, usize, u64)> = Vec::new();
    for mode in &spec.modes {
        for &lambda in &spec.lambdas {
            for users in spec.users.0..=spec.users.1 {
                for rep in 0..spec.reps {
                    jobs.push((*mode, lambda, users, spec.config.seed + rep as u64));
                }
            }
        }
    }
    jobs.sort_by(|a, b| {
        (a.0.token(), a.1, a.2, a.3)
            .partial_cmp(&(b.0.token(), b.1, b.2, b.3))
            .unwrap()
    });

    let base = &spec.config;
    let rows: Vec<Result<String, CliError>> = with_sweep_pool(|| {
        jobs.par_iter()
            .map(|&(mode, lambda, users, seed)| {
                let cfg = SystemConfig {
                    mode,
                    traffic_rate: lambda,
                    seed,
                    ..base.clone()
                };
                let metrics =
                    run_simulation(&cfg, users).map_err(|e| CliError::Config(e.to_string()))?;
                Ok(format!(
                    "{},{},{},{},{},{},{},{},{}",
                    mode.token(),
                    lambda,
                    users,
                    seed,
                    metrics.aggregate_rate,
                    metrics.aggregate_rate / users as f64,
                    metrics.analog_rb_fraction,
                    metrics.analog_due_to_no_data_fraction,
                    metrics.unused_rb_fraction
                ))
            })
            .collect()
    })?;

    let mut csv = String::from(SIMULATE_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }
    Ok(csv)
}

/// Deterministic estimate sweep: `lambda,num_users,estimate`.
pub fn cmd_estimate(spec: &ExperimentSpec) -> Result<String, CliError> {
    spec.validate()?;
    let mut csv = String::from("lambda,num_users,estimate\n");
    for &lambda in &spec.lambdas {
        let cfg = SystemConfig {
            traffic_rate: lambda,
            ..spec.config.clone()
        };
        for users in spec.users.0..=spec.users.1 {
            let estimate =
                throughput_estimate(&cfg, users).map_err(|e| CliError::Config(e.to_string()))?;
            csv.push_str(&format!("{lambda},{users},{estimate}\n"));
        }
    }
    Ok(csv)
}

/// Deterministic bound sweep: `num_users,max_rate`.
pub fn cmd_bound(spec: &ExperimentSpec) -> Result<String, CliError> {
    spec.validate()?;
    let mut csv = String::from("num_users,max_rate\n");
    for users in spec.users.0..=spec.users.1 {
        let rate =
            max_rate(users as f64, &spec.config).map_err(|e| CliError::Config(e.to_string()))?;
        csv.push_str(&format!("{users},{rate}\n"));
    }
    Ok(csv)
}

/// Component, power, cost and sample-stream tables for the three
/// architectures.
pub fn cmd_cost(catalog: &Catalog, n_antennas: usize, n_chains: usize) -> Result<String, CliError> {
    if n_antennas < 1 || n_chains < 1 {
        return Err(CliError::Config(
            "antenna and chain counts must be at least 1".into(),
        ));
    }
    let boms: Vec<_> = Architecture::ALL
        .iter()
        .map(|&arch| bom(arch, n_antennas, n_chains))
        .collect();

    let mut out = String::new();
    out.push_str(&format!(
        "Components (N={n_antennas} antennas, K={n_chains} RF chains)\n"
    ));
    out.push_str(&format!(
        "{:<14} {:>8} {:>8} {:>8}\n",
        "architecture", "mixers", "adcs", "lnas"
    ));
    for b in &boms {
        out.push_str(&format!(
            "{:<14} {:>8} {:>8} {:>8}\n",
            b.architecture.label(),
            b.mixers,
            b.adcs,
            b.lnas
        ));
    }

    out.push_str(&format!(
        "\nPower [W] (unit: mixer {} {}, ADC {} {}, LNA {} {})\n",
        catalog.mixer.name,
        catalog.mixer.unit_power_w,
        catalog.adc.name,
        catalog.adc.unit_power_w,
        catalog.lna.name,
        catalog.lna.unit_power_w
    ));
    out.push_str(&format!(
        "{:<14} {:>9} {:>9} {:>9} {:>9}\n",
        "architecture", "mixers", "adcs", "lnas", "total"
    ));
    for b in &boms {
        let p = power_table(b, catalog);
        out.push_str(&format!(
            "{:<14} {:>9.2} {:>9.2} {:>9.2} {:>9.2}\n",
            b.architecture.label(),
            p.mixers,
            p.adcs,
            p.lnas,
            p.total
        ));
    }

    out.push_str("\nCost [EUR]\n");
    out.push_str(&format!(
        "{:<14} {:>10} {:>10} {:>10} {:>10}\n",
        "architecture", "mixers", "adcs", "lnas", "total"
    ));
    for b in &boms {
        let c = cost_table(b, catalog);
        out.push_str(&format!(
            "{:<14} {:>10.2} {:>10.2} {:>10.2} {:>10.2}\n",
            b.architecture.label(),
            c.mixers,
            c.adcs,
            c.lnas,
            c.total
        ));
    }

    out.push_str(&format!(
        "\nBaseband sample stream ({} Msps, {}-bit ADCs)\n",
        DEFAULT_ADC_SAMPLE_RATE / 1e6,
        DEFAULT_ADC_RESOLUTION_BITS
    ));
    for b in &boms {
        let rate = adc_datarate(b.adcs, DEFAULT_ADC_SAMPLE_RATE, DEFAULT_ADC_RESOLUTION_BITS);
        out.push_str(&format!(
            "{:<14} {:>8} Gbps\n",
            b.architecture.label(),
            rate / 1e9
        ));
    }
    Ok(out)
}

// ---- codec helpers ---------------------------------------------------------

pub fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn from_hex(text: &str) -> Result<Vec<u8>, CliError> {
    let text = text.trim().trim_start_matches("0x");
    if !text.len().is_multiple_of(2) {
        return Err(CliError::Config(format!(
            "hex string '{text}' has odd length"
        )));
    }
    (0..text.len())
        .step_by(2)
        .map(|i| {
            u8::from_str_radix(&text[i..i + 2], 16)
                .map_err(|_| CliError::Config(format!("invalid hex byte '{}'", &text[i..i + 2])))
        })
        .collect()
}

fn parse_int(text: &str) -> Result<u32, CliError> {
    let text = text.trim();
    let parsed = if let Some(hex) = text.strip_prefix("0x") {
        u32::from_str_radix(hex, 16)
    } else if let Some(bin) = text.strip_prefix("0b") {
        u32::from_str_radix(bin, 2)
    } else {
        text.parse()
    };
    parsed.map_err(|_| CliError::Config(format!("cannot parse integer '{text}'")))
}

fn fields(text: &str, expected: usize, what: &str) -> Result<Vec<u32>, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != expected {
        return Err(CliError::Config(format!(
            "{what} takes {expected} comma-separated fields, got {}",
            parts.len()
        )));
    }
    parts.into_iter().map(parse_int).collect()
}

fn int_to<T: TryFrom<u32>>(value: u32, what: &str) -> Result<T, CliError> {
    T::try_from(value).map_err(|_| CliError::Config(format!("{what} value {value} out of range")))
}

fn dmrs_from_width(width: u32) -> Result<DmrsConfig, CliError> {
    match width {
        4 => Ok(DmrsConfig::Width4),
        5 => Ok(DmrsConfig::Width5),
        6 => Ok(DmrsConfig::Width6),
        other => Err(CliError::Config(format!(
            "antenna-port field width must be 4, 5 or 6, got {other}"
        ))),
    }
}

fn codec_err(e: hetrank::signaling::SignalingError) -> CliError {
    CliError::Config(e.to_string())
}

/// `codec encode abcap fix,tradable,mask [...]` -> hex.
pub fn encode_abcap_cmd(entries: &[String]) -> Result<String, CliError> {
    let parsed: Vec<AbCap> = entries
        .iter()
        .map(|entry| {
            let f = fields(entry, 3, "an abcap entry")?;
            Ok(AbCap {
                num_fix_analog_chains: int_to(f[0], "num_fix_analog_chains")?,
                num_tradable_chains: int_to(f[1], "num_tradable_chains")?,
                tradcapab: int_to(f[2], "tradcapab")?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(to_hex(&encode_abcap_list(&parsed).map_err(codec_err)?))
}

pub fn decode_abcap_cmd(hex: &str) -> Result<String, CliError> {
    let entries = decode_abcap_list(&from_hex(hex)?).map_err(codec_err)?;
    let mut out = format!("entries = {}\n", entries.len());
    for (i, entry) in entries.iter().enumerate() {
        out.push_str(&format!(
            "entry {i}: num_fix_analog_chains = {}, num_tradable_chains = {}, tradcapab = {:#04x}\n",
            entry.num_fix_analog_chains, entry.num_tradable_chains, entry.tradcapab
        ));
        for option in tradcap_options(entry.tradcapab) {
            out.push_str(&format!(
                "  trade option: {} antennas at bandwidth/{}\n",
                option.antennas, option.bandwidth_divisor
            ));
        }
    }
    Ok(out)
}

/// `codec encode bwp start,num,use,chains` -> hex.
pub fn encode_bwp_cmd(arg: &str) -> Result<String, CliError> {
    let f = fields(arg, 4, "a bwp message")?;
    let msg = BwpTradchain {
        start_rb: int_to(f[0], "start_rb")?,
        num_rb: int_to(f[1], "num_rb")?,
        tradcapuse: int_to(f[2], "tradcapuse")?,
        num_trade_chains: int_to(f[3], "num_trade_chains")?,
    };
    Ok(to_hex(&encode_bwp_tradchain(&msg).map_err(codec_err)?))
}

pub fn decode_bwp_cmd(hex: &str) -> Result<String, CliError> {
    let msg = decode_bwp_tradchain(&from_hex(hex)?).map_err(codec_err)?;
    Ok(format!(
        "start_rb = {}\nnum_rb = {}\ntradcapuse = {:#04x}\nnum_trade_chains = {}\n",
        msg.start_rb, msg.num_rb, msg.tradcapuse, msg.num_trade_chains
    ))
}

/// `codec encode dci mcs,width,ports` -> hex.
pub fn encode_dci_cmd(arg: &str) -> Result<String, CliError> {
    let f = fields(arg, 3, "a dci message")?;
    let msg = DciHetExt {
        mcs_digital: int_to(f[0], "mcs_digital")?,
        dmrs_config: dmrs_from_width(f[1])?,
        antenna_ports_digital: int_to(f[2], "antenna_ports_digital")?,
    };
    Ok(to_hex(&encode_dci_ext(&msg).map_err(codec_err)?))
}

pub fn decode_dci_cmd(hex: &str) -> Result<String, CliError> {
    let msg = decode_dci_ext(&from_hex(hex)?).map_err(codec_err)?;
    Ok(format!(
        "mcs_digital = {}\nport_field_width = {}\nantenna_ports_digital = {}\n",
        msg.mcs_digital,
        msg.dmrs_config.port_field_width(),
        msg.antenna_ports_digital
    ))
}
