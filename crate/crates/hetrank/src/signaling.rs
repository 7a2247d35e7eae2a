//! Bit-exact codecs for the capability, configuration and allocation
//! signaling extensions.
//!
//! The messages use a fixed canonical layout so that encode/decode are exact
//! inverses and every accepted byte sequence re-encodes to itself:
//!
//! - **ABCap list**: one count byte, then per entry the two chain counts
//!   packed as 4-bit fields (fixed-analog count in the high nibble) followed
//!   by the `tradcapab` mask byte.
//! - **BWP-Tradchain**: `start_rb` and `num_rb` as 16-bit big-endian words,
//!   then the `tradcapuse` mask byte and the `num_trade_chains` byte.
//! - **DCI extension**: an MSB-first bit string of the 5-bit digital MCS, a
//!   2-bit DMRS configuration selecting the port-field width (00 -> 4 bits,
//!   01 -> 5, 10 -> 6) and the antenna-port field itself, zero-padded to a
//!   byte boundary (always two bytes).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignalingError {
    #[error("message ends after {actual} byte(s), expected {expected}")]
    Truncated { expected: usize, actual: usize },
    #[error("{0} trailing byte(s) after the message")]
    TrailingBytes(usize),
    #[error("{field} value {value} exceeds the maximum {max}")]
    FieldRange {
        field: &'static str,
        value: u32,
        max: u32,
    },
    #[error("capability list of {0} entries exceeds the 255-entry limit")]
    ListTooLong(usize),
    #[error("tradcapuse must have exactly one bit set, got {0:#010b}")]
    TradeSelection(u8),
    #[error("num_rb must be at least 1")]
    ZeroRbCount,
    #[error("num_trade_chains must be at least 1")]
    ZeroTradeChains,
    #[error("dmrs_config value 11 is reserved")]
    ReservedDmrsConfig,
    #[error("padding bits must be zero")]
    NonZeroPadding,
}

/// One rank-bandwidth trade-off capability entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbCap {
    /// RF chains that only do analog beamforming (0..=15).
    pub num_fix_analog_chains: u8,
    /// RF chains that can be repurposed for digital beamforming (0..=15).
    pub num_tradable_chains: u8,
    /// Bit `b` set: the tradable chains can acquire `2^(b+1)` antennas at
    /// `1 / 2^(b+1)` of the full bandwidth.
    pub tradcapab: u8,
}

/// Digital-beamforming sub-band configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BwpTradchain {
    pub start_rb: u16,
    /// Width of the sub-band in RBs, at least 1.
    pub num_rb: u16,
    /// Selected trade-off; exactly one bit of the advertised `tradcapab`.
    pub tradcapuse: u8,
    /// Tradable chains to switch into digital beamforming, at least 1.
    pub num_trade_chains: u8,
}

/// DMRS configuration governing the antenna-port field width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmrsConfig {
    Width4 = 0b00,
    Width5 = 0b01,
    Width6 = 0b10,
}

impl DmrsConfig {
    pub fn port_field_width(&self) -> u32 {
        match self {
            DmrsConfig::Width4 => 4,
            DmrsConfig::Width5 => 5,
            DmrsConfig::Width6 => 6,
        }
    }

    fn from_bits(bits: u32) -> Result<Self, SignalingError> {
        match bits {
            0b00 => Ok(DmrsConfig::Width4),
            0b01 => Ok(DmrsConfig::Width5),
            0b10 => Ok(DmrsConfig::Width6),
            _ => Err(SignalingError::ReservedDmrsConfig),
        }
    }
}

/// Extra allocation fields for the digital beamforming part of a grant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DciHetExt {
    /// Modulation and coding scheme for the digital sub-band (0..=31).
    pub mcs_digital: u8,
    pub dmrs_config: DmrsConfig,
    /// Antenna port(s) and layer count, below `2^w` for the configured width.
    pub antenna_ports_digital: u8,
}

/// One advertised rank-bandwidth trade point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeOption {
    pub antennas: u32,
    pub bandwidth_divisor: u32,
}

fn check_nibble(field: &'static str, value: u8) -> Result<(), SignalingError> {
    if value > 0x0f {
        return Err(SignalingError::FieldRange {
            field,
            value: value as u32,
            max: 15,
        });
    }
    Ok(())
}

/// Encodes a capability list (at most 255 entries).
pub fn encode_abcap_list(entries: &[AbCap]) -> Result<Vec<u8>, SignalingError> {
    if entries.len() > 255 {
        return Err(SignalingError::ListTooLong(entries.len()));
    }
    let mut out = Vec::with_capacity(1 + 2 * entries.len());
    out.push(entries.len() as u8);
    for entry in entries {
        check_nibble("num_fix_analog_chains", entry.num_fix_analog_chains)?;
        check_nibble("num_tradable_chains", entry.num_tradable_chains)?;
        out.push((entry.num_fix_analog_chains << 4) | entry.num_tradable_chains);
        out.push(entry.tradcapab);
    }
    Ok(out)
}

/// Decodes a capability list, rejecting truncated or oversized input.
pub fn decode_abcap_list(bytes: &[u8]) -> Result<Vec<AbCap>, SignalingError> {
    let &count = bytes.first().ok_or(SignalingError::Truncated {
        expected: 1,
        actual: 0,
    })?;
    let expected = 1 + 2 * count as usize;
    if bytes.len() < expected {
        return Err(SignalingError::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(SignalingError::TrailingBytes(bytes.len() - expected));
    }
    let entries = bytes[1..]
        .chunks_exact(2)
        .map(|pair| AbCap {
            num_fix_analog_chains: pair[0] >> 4,
            num_tradable_chains: pair[0] & 0x0f,
            tradcapab: pair[1],
        })
        .collect();
    Ok(entries)
}

/// Expands a trade-off mask into `(antennas, bandwidth divisor)` pairs,
/// in increasing antenna order.
pub fn tradcap_options(mask: u8) -> Vec<TradeOption> {
    (0..8)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| TradeOption {
            antennas: 1 << (b + 1),
            bandwidth_divisor: 1 << (b + 1),
        })
        .collect()
}

fn validate_bwp(msg: &BwpTradchain) -> Result<(), SignalingError> {
    if msg.tradcapuse.count_ones() != 1 {
        return Err(SignalingError::TradeSelection(msg.tradcapuse));
    }
    if msg.num_rb == 0 {
        return Err(SignalingError::ZeroRbCount);
    }
    if msg.num_trade_chains == 0 {
        return Err(SignalingError::ZeroTradeChains);
    }
    Ok(())
}

/// Encodes the sub-band configuration into its fixed 6-byte layout.
pub fn encode_bwp_tradchain(msg: &BwpTradchain) -> Result<Vec<u8>, SignalingError> {
    validate_bwp(msg)?;
    let mut out = Vec::with_capacity(6);
    out.extend_from_slice(&msg.start_rb.to_be_bytes());
    out.extend_from_slice(&msg.num_rb.to_be_bytes());
    out.push(msg.tradcapuse);
    out.push(msg.num_trade_chains);
    Ok(out)
}

/// Decodes and validates the 6-byte sub-band configuration.
pub fn decode_bwp_tradchain(bytes: &[u8]) -> Result<BwpTradchain, SignalingError> {
    if bytes.len() < 6 {
        return Err(SignalingError::Truncated {
            expected: 6,
            actual: bytes.len(),
        });
    }
    if bytes.len() > 6 {
        return Err(SignalingError::TrailingBytes(bytes.len() - 6));
    }
    let msg = BwpTradchain {
        start_rb: u16::from_be_bytes([bytes[0], bytes[1]]),
        num_rb: u16::from_be_bytes([bytes[2], bytes[3]]),
        tradcapuse: bytes[4],
        num_trade_chains: bytes[5],
    };
    validate_bwp(&msg)?;
    Ok(msg)
}

/// MSB-first bit accumulator.
struct BitWriter {
    bytes: Vec<u8>,
    used_bits: usize,
}

impl BitWriter {
    fn new() -> Self {
        BitWriter {
            bytes: Vec::new(),
            used_bits: 0,
        }
    }

    fn push(&mut self, value: u32, width: u32) {
        for i in (0..width).rev() {
            if self.used_bits.is_multiple_of(8) {
                self.bytes.push(0);
            }
            let bit = (value >> i) & 1;
            let byte = self.bytes.last_mut().unwrap();
            *byte |= (bit as u8) << (7 - self.used_bits % 8);
            self.used_bits += 1;
        }
    }
}

/// MSB-first bit cursor.
struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    fn take(&mut self, width: u32) -> Result<u32, SignalingError> {
        let mut value = 0u32;
        for _ in 0..width {
            let byte = self
                .bytes
                .get(self.pos / 8)
                .ok_or(SignalingError::Truncated {
                    expected: (self.pos + width as usize).div_ceil(8),
                    actual: self.bytes.len(),
                })?;
            value = (value << 1) | ((byte >> (7 - self.pos % 8)) & 1) as u32;
            self.pos += 1;
        }
        Ok(value)
    }

    fn expect_zero_padding(&mut self) -> Result<(), SignalingError> {
        while self.pos < self.bytes.len() * 8 {
            if self.take(1)? != 0 {
                return Err(SignalingError::NonZeroPadding);
            }
        }
        Ok(())
    }
}

/// Encodes the allocation extension; the result is always two bytes.
pub fn encode_dci_ext(msg: &DciHetExt) -> Result<Vec<u8>, SignalingError> {
    if msg.mcs_digital > 31 {
        return Err(SignalingError::FieldRange {
            field: "mcs_digital",
            value: msg.mcs_digital as u32,
            max: 31,
        });
    }
    let width = msg.dmrs_config.port_field_width();
    let max_ports = (1u32 << width) - 1;
    if msg.antenna_ports_digital as u32 > max_ports {
        return Err(SignalingError::FieldRange {
            field: "antenna_ports_digital",
            value: msg.antenna_ports_digital as u32,
            max: max_ports,
        });
    }
    let mut writer = BitWriter::new();
    writer.push(msg.mcs_digital as u32, 5);
    writer.push(msg.dmrs_config as u32, 2);
    writer.push(msg.antenna_ports_digital as u32, width);
    // Zero-pad to the byte boundary (7 + w bits always span two bytes).
    while !writer.used_bits.is_multiple_of(8) {
        writer.push(0, 1);
    }
    Ok(writer.bytes)
}

/// Decodes the two-byte allocation extension, rejecting reserved DMRS values
/// and non-zero padding.
pub fn decode_dci_ext(bytes: &[u8]) -> Result<DciHetExt, SignalingError> {
    if bytes.len() < 2 {
        return Err(SignalingError::Truncated {
            expected: 2,
            actual: bytes.len(),
        });
    }
    if bytes.len() > 2 {
        return Err(SignalingError::TrailingBytes(bytes.len() - 2));
    }
    let mut reader = BitReader::new(bytes);
    let mcs = reader.take(5)?;
    let dmrs = DmrsConfig::from_bits(reader.take(2)?)?;
    let ports = reader.take(dmrs.port_field_width())?;
    reader.expect_zero_padding()?;
    Ok(DciHetExt {
        mcs_digital: mcs as u8,
        dmrs_config: dmrs,
        antenna_ports_digital: ports as u8,
    })
}
