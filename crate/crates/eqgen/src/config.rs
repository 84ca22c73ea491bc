//! Instructor configuration: the difficulty controller's hyperparameters and
//! the flat `key = value` config-file format.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    BadLine { line: usize, text: String },
    #[error("line {line}: invalid value for `{key}`: {message}")]
    BadValue {
        line: usize,
        key: String,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Hyperparameters of the difficulty controller.
///
/// Probabilities live in `[0, 1)`. The quotas bound how many law rules of
/// each category a single question may use, and their sum may not exceed
/// `max_laws`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultyConfig {
    /// Initial probability of choosing a law rule over a structural rule.
    pub p_law_init: f64,
    /// Increment applied after every structural expansion; a law application
    /// resets the probability to `p_law_init`.
    pub p_law_step: f64,
    /// Minimum number of leaves the left-side expression must reach.
    pub min_leaf_count: usize,
    /// Widening of the literal rule's selection bucket once the left side
    /// has reached `min_leaf_count` leaves.
    pub p_literal_boost: f64,
    /// Per-category law quotas (easy, median, hard).
    pub quota_easy: usize,
    pub quota_median: usize,
    pub quota_hard: usize,
    /// Upper bound on the total number of law applications.
    pub max_laws: usize,
    /// Expansion depth at which the literal rule becomes the only choice.
    pub max_depth: usize,
    /// Number of variables drawn from (a prefix of `p, q, r, s, t, u, v, w`).
    pub pool_size: usize,
    /// Cyclic-shift offset of the digit stream; must be odd.
    pub offset: usize,
    /// Optional selection-order permutation of the five structural rules.
    pub structural_order: Option<Vec<usize>>,
    /// Optional selection-order permutation of the nineteen law rules.
    pub law_order: Option<Vec<usize>>,
}

impl Default for DifficultyConfig {
    fn default() -> Self {
        DifficultyConfig {
            p_law_init: 0.25,
            p_law_step: 0.125,
            min_leaf_count: 4,
            p_literal_boost: 0.25,
            quota_easy: 1,
            quota_median: 1,
            quota_hard: 1,
            max_laws: 3,
            max_depth: 8,
            pool_size: 3,
            offset: 5,
            structural_order: None,
            law_order: None,
        }
    }
}

impl DifficultyConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let prob = |name: &str, v: f64| {
            if (0.0..1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!(
                    "{name} must be in [0, 1), got {v}"
                )))
            }
        };
        prob("p_law_init", self.p_law_init)?;
        prob("p_law_step", self.p_law_step)?;
        prob("p_literal_boost", self.p_literal_boost)?;
        if self.min_leaf_count < 1 {
            return Err(ConfigError::Invalid("min_leaf_count must be >= 1".into()));
        }
        if !(2..=32).contains(&self.max_depth) {
            return Err(ConfigError::Invalid(format!(
                "max_depth must be in 2..=32, got {}",
                self.max_depth
            )));
        }
        if self.quota_easy + self.quota_median + self.quota_hard > self.max_laws {
            return Err(ConfigError::Invalid(format!(
                "category quotas sum to {}, exceeding max_laws {}",
                self.quota_easy + self.quota_median + self.quota_hard,
                self.max_laws
            )));
        }
        if !(1..=8).contains(&self.pool_size) {
            return Err(ConfigError::Invalid(format!(
                "pool_size must be in 1..=8, got {}",
                self.pool_size
            )));
        }
        if self.offset == 0 || self.offset.is_multiple_of(2) {
            return Err(ConfigError::Invalid(format!(
                "offset must be a positive odd integer, got {}",
                self.offset
            )));
        }
        check_permutation("structural_order", self.structural_order.as_deref(), 5)?;
        check_permutation("law_order", self.law_order.as_deref(), 19)?;
        Ok(())
    }
}

fn check_permutation(
    name: &str,
    order: Option<&[usize]>,
    len: usize,
) -> Result<(), ConfigError> {
    let Some(order) = order else { return Ok(()) };
    let mut seen = vec![false; len];
    if order.len() != len {
        return Err(ConfigError::Invalid(format!(
            "{name} must list all {len} rule indices, got {}",
            order.len()
        )));
    }
    for &i in order {
        if i >= len || seen[i] {
            return Err(ConfigError::Invalid(format!(
                "{name} is not a permutation of 0..{len}"
            )));
        }
        seen[i] = true;
    }
    Ok(())
}

/// A full run configuration: difficulty plus the optional instructor salt.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub difficulty: DifficultyConfig,
    /// Prepended to the student key before hashing, so a leaked generator
    /// cannot be replayed without it.
    pub salt: Option<String>,
}

impl RunConfig {
    /// Reads a flat `key = value` config file. Unknown keys are rejected.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut config = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(ConfigError::BadLine {
                    line,
                    text: trimmed.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let d = &mut config.difficulty;
            match key {
                "p_law_init" => d.p_law_init = parse_value(line, key, value)?,
                "p_law_step" => d.p_law_step = parse_value(line, key, value)?,
                "min_leaf_count" => d.min_leaf_count = parse_value(line, key, value)?,
                "p_literal_boost" => d.p_literal_boost = parse_value(line, key, value)?,
                "quota_easy" => d.quota_easy = parse_value(line, key, value)?,
                "quota_median" => d.quota_median = parse_value(line, key, value)?,
                "quota_hard" => d.quota_hard = parse_value(line, key, value)?,
                "max_laws" => d.max_laws = parse_value(line, key, value)?,
                "max_depth" => d.max_depth = parse_value(line, key, value)?,
                "pool_size" => d.pool_size = parse_value(line, key, value)?,
                "offset" => d.offset = parse_value(line, key, value)?,
                "structural_order" => d.structural_order = Some(parse_list(line, key, value)?),
                "law_order" => d.law_order = Some(parse_list(line, key, value)?),
                "salt" => config.salt = Some(value.to_string()),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        config.difficulty.validate()?;
        Ok(config)
    }
}

fn parse_value<T: std::str::FromStr>(
    line: usize,
    key: &str,
    value: &str,
) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::BadValue {
        line,
        key: key.to_string(),
        message: e.to_string(),
    })
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<usize>, ConfigError> {
    value
        .split(',')
        .map(|part| parse_value(line, key, part.trim()))
        .collect()
}
