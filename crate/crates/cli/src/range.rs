//! `min:max:count_or_step` ranges.
//!
//! A bare number is a single value. The third field is a point count when it
//! is written as an integer (`0:3:301`) and a step when it has a decimal
//! point or exponent (`0.25:5:0.25`, `0:1:1e-2`).

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    Count(usize),
    Step(f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeError(String);

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RangeError {}

fn number(s: &str, what: &str) -> Result<f64, RangeError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| RangeError(format!("{what} '{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(RangeError(format!("{what} '{s}' is not finite")));
    }
    Ok(v)
}

impl FromStr for Range {
    type Err = RangeError;

    fn from_str(s: &str) -> Result<Self, RangeError> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [single] => {
                let v = number(single, "value")?;
                Ok(Range {
                    min: v,
                    max: v,
                    spacing: Spacing::Count(1),
                })
            }
            [lo, hi, third] => {
                let min = number(lo, "range minimum")?;
                let max = number(hi, "range maximum")?;
                if max < min {
                    return Err(RangeError(format!("range '{s}' has max < min")));
                }
                let third = third.trim();
                let spacing = if third.chars().all(|c| c.is_ascii_digit()) && !third.is_empty() {
                    let n: usize = third
                        .parse()
                        .map_err(|_| RangeError(format!("count '{third}' out of range")))?;
                    if n == 0 {
                        return Err(RangeError("range count must be at least 1".into()));
                    }
                    if n == 1 && max > min {
                        return Err(RangeError(format!(
                            "range '{s}' has one point but min < max"
                        )));
                    }
                    Spacing::Count(n)
                } else {
                    let step = number(third, "range step")?;
                    if step <= 0.0 {
                        return Err(RangeError(format!("range step '{third}' must be positive")));
                    }
                    Spacing::Step(step)
                };
                Ok(Range { min, max, spacing })
            }
            _ => Err(RangeError(format!(
                "'{s}' is neither a number nor min:max:count_or_step"
            ))),
        }
    }
}

impl Range {
    pub fn len(&self) -> usize {
        match self.spacing {
            Spacing::Count(n) => n,
            // tolerate the last step landing a hair past max
            Spacing::Step(h) => {
                ((self.max - self.min) / h * (1.0 + 1e-12) + 1e-9).floor() as usize + 1
            }
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Count(n) => xyquench::analysis::linspace(self.min, self.max, n),
            Spacing::Step(h) => (0..self.len()).map(|i| self.min + h * i as f64).collect(),
        }
    }
}
