use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// A list of grid values given on the command line as `lo:hi:count`
/// (linear), `geom:lo:hi:count` (geometric) or `a,b,c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    spec: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.spec)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_nan() {
        return Err("NaN is not a grid value".into());
    }
    Ok(x)
}

fn count(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("not a point count: {s:?}"))
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(spec: &str) -> Result<Self, String> {
        let parts: Vec<&str> = spec.split(':').collect();
        let values = match parts.as_slice() {
            ["geom", lo, hi, k] => betafluct::stats::geometric_grid(number(lo)?, number(hi)?, count(k)?).map_err(|e| e.to_string())?,
            [lo, hi, k] => {
                let (lo, hi, k) = (number(lo)?, number(hi)?, count(k)?);
                if k == 0 || hi < lo {
                    return Err("linear grid needs lo <= hi and count >= 1".into());
                }
                if k == 1 {
                    vec![lo]
                } else {
                    (0..k)
                        .map(|i| if i + 1 == k { hi } else { lo + (hi - lo) * i as f64 / (k - 1) as f64 })
                        .collect()
                }
            }
            [list] => list.split(',').map(number).collect::<Result<_, _>>()?,
            _ => return Err(format!("cannot parse grid {spec:?}; use lo:hi:count, geom:lo:hi:count or a,b,c")),
        };
        if values.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Self {
            spec: spec.to_string(),
            values,
        })
    }
}
