//! Seeding: turns a student-information string into the stream of MD5 hex
//! digits that supplies every random choice during generation.
//!
//! The stream cycles over the 32 digest digits. Each completed pass shifts
//! the start index by a configurable odd offset, so over 32 passes every
//! position serves as the pass start exactly once.

use thiserror::Error;

/// Number of hex digits in an MD5 digest.
pub const DIGEST_DIGITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("offset {0} must be a positive odd integer")]
    BadOffset(usize),
    #[error("digest must be {DIGEST_DIGITS} hex digits, got {0:?}")]
    BadDigest(String),
}

/// MD5 digest of `info`, printed as 32 lowercase hex characters.
pub fn md5_hex(info: &[u8]) -> String {
    format!("{:x}", md5::compute(info))
}

/// A cursor over the digits of an MD5 digest, cycling forever.
///
/// Read `j` of pass `k` returns `digits[(k * offset + j) % 32]`: the first
/// pass walks the digest in print order, and each later pass starts `offset`
/// positions further along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HexStream {
    digits: [u8; DIGEST_DIGITS],
    cursor: usize,
    pass_count: u64,
    offset: usize,
}

impl HexStream {
    /// Builds a stream over a 32-hex-digit digest string.
    ///
    /// The offset must be odd (and therefore coprime to the digit count) so
    /// that consecutive passes start at distinct positions.
    pub fn new(hex: &str, offset: usize) -> Result<Self, SeedError> {
        if offset == 0 || offset.is_multiple_of(2) {
            return Err(SeedError::BadOffset(offset));
        }
        if hex.chars().count() != DIGEST_DIGITS {
            return Err(SeedError::BadDigest(hex.to_string()));
        }
        let mut digits = [0u8; DIGEST_DIGITS];
        for (i, ch) in hex.chars().enumerate() {
            digits[i] = ch
                .to_digit(16)
                .ok_or_else(|| SeedError::BadDigest(hex.to_string()))? as u8;
        }
        Ok(HexStream {
            digits,
            cursor: 0,
            pass_count: 0,
            offset,
        })
    }

    /// Hashes `info` and builds the stream over the resulting digest.
    pub fn from_info(info: &[u8], offset: usize) -> Result<Self, SeedError> {
        Self::new(&md5_hex(info), offset)
    }

    /// Next digit in `[0, 15]`. The stream never ends.
    pub fn next_hex(&mut self) -> u8 {
        let start = (self.pass_count as usize).wrapping_mul(self.offset);
        let value = self.digits[(start + self.cursor) % DIGEST_DIGITS];
        self.cursor += 1;
        if self.cursor == DIGEST_DIGITS {
            self.cursor = 0;
            self.pass_count += 1;
        }
        value
    }

    /// The digest this stream reads from, as lowercase hex.
    pub fn digest_hex(&self) -> String {
        self.digits
            .iter()
            .map(|d| char::from_digit(*d as u32, 16).expect("digit in range"))
            .collect()
    }

    /// Completed full passes over the digest.
    pub fn pass_count(&self) -> u64 {
        self.pass_count
    }
}
