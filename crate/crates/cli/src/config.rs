//! System selection: named presets and the line-oriented IFS file.
//!
//! ```text
//! # two-map Cantor system with a reflection
//! dim 1
//! maps 2
//! map r=1/3 Q=[-1] b=(1/3)
//! map r=1/3 Q=id b=(2/3)
//! ```

use std::fmt;
use std::str::FromStr;

use fractafold_core::ifs::{Region, SignedPermutation, SimilarityMap, SimilaritySystem};
use fractafold_core::presets;
use fractafold_core::{Point, Rational};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Dyadic,
    Simplex { n: usize, r: Rational },
    Gasket,
}

impl FromStr for Preset {
    type Err = String;

    /// `dyadic`, `gasket` or `simplex:<N>:<r>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dyadic" => return Ok(Preset::Dyadic),
            "gasket" => return Ok(Preset::Gasket),
            _ => {}
        }
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() == 3 && parts[0] == "simplex" {
            let n: usize = parts[1]
                .parse()
                .map_err(|_| format!("invalid simplex size `{}`", parts[1]))?;
            if n < 2 {
                return Err("simplex presets need N >= 2".into());
            }
            let r = parse_rational(parts[2]).map_err(|m| format!("invalid ratio `{}`: {}", parts[2], m))?;
            return Ok(Preset::Simplex { n, r });
        }
        Err(format!("unknown preset `{}` (expected dyadic, gasket or simplex:<N>:<r>)", s))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Dyadic => f.write_str("dyadic"),
            Preset::Gasket => f.write_str("gasket"),
            Preset::Simplex { n, r } => write!(f, "simplex:{}:{}", n, r),
        }
    }
}

/// A validated system together with the open region used to certify the
/// open set condition.
#[derive(Clone, Debug)]
pub struct LoadedSystem {
    pub label: String,
    pub system: SimilaritySystem,
    pub region: Region,
}

impl Preset {
    pub fn load(&self) -> Result<LoadedSystem, String> {
        let (system, region) = match self {
            Preset::Dyadic => (presets::dyadic(), presets::dyadic_region()),
            Preset::Gasket => (presets::gasket(), presets::simplex_region(3)),
            Preset::Simplex { n, r } => (
                presets::simplex(*n, r.clone()).map_err(|e| e.to_string())?,
                presets::simplex_region(*n),
            ),
        };
        Ok(LoadedSystem { label: self.to_string(), system, region })
    }
}

/// `p/q` or an integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    let ok = t
        .char_indices()
        .all(|(i, c)| c.is_ascii_digit() || c == '/' || (i == 0 && (c == '-' || c == '+')));
    if !ok {
        return Err("expected `p/q` with integer p and q".into());
    }
    let q: Rational = t.parse().map_err(|_| "expected `p/q` with integer p and q".to_string())?;
    Ok(q)
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, column, message: message.into() }
}

/// Parses the IFS file format. Blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<LoadedSystem, ConfigError> {
    let mut dim: Option<usize> = None;
    let mut count: Option<(usize, usize)> = None;
    let mut maps: Vec<SimilarityMap> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let indent = content.len() - content.trim_start().len();
        let body = content.trim();
        if body.is_empty() {
            continue;
        }
        let (keyword, rest) = match body.find(char::is_whitespace) {
            Some(i) => (&body[..i], &body[i..]),
            None => (body, ""),
        };
        let rest_col = indent + keyword.len() + (rest.len() - rest.trim_start().len()) + 1;
        let rest = rest.trim();
        match keyword {
            "dim" => {
                let d: usize = rest.parse().map_err(|_| err(line, rest_col, "expected a positive dimension"))?;
                if d == 0 {
                    return Err(err(line, rest_col, "dimension must be positive"));
                }
                dim = Some(d);
            }
            "maps" => {
                let n: usize = rest.parse().map_err(|_| err(line, rest_col, "expected a map count"))?;
                count = Some((n, line));
            }
            "map" => {
                let d = dim.ok_or_else(|| err(line, indent + 1, "`dim` must precede `map`"))?;
                maps.push(parse_map(rest, d, line, rest_col)?);
            }
            other => {
                return Err(err(line, indent + 1, format!("unknown keyword `{}`", other)));
            }
        }
    }
    let dim = dim.ok_or_else(|| err(last_line.max(1), 1, "missing `dim`"))?;
    if let Some((n, line)) = count {
        if n != maps.len() {
            return Err(err(line, 1, format!("declared {} maps, found {}", n, maps.len())));
        }
    }
    let system = SimilaritySystem::new(maps).map_err(|e| err(last_line.max(1), 1, e.to_string()))?;
    let (lo, hi) = system.bounding_box();
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    // A degenerate box has no interior; widen flat coordinates so the
    // region is at least a candidate.
    for i in 0..dim {
        if (hi.coord(i) - lo.coord(i)).is_zero() {
            let mut l = lo.clone().into_coords();
            let mut h = hi.clone().into_coords();
            l[i] -= Rational::from_integer(1.into());
            h[i] += Rational::from_integer(1.into());
            lo = Point::new(l);
            hi = Point::new(h);
        }
    }
    Ok(LoadedSystem { label: "config".into(), system, region: Region::OpenBox { lo, hi } })
}

fn parse_map(text: &str, dim: usize, line: usize, col: usize) -> Result<SimilarityMap, ConfigError> {
    let mut ratio = None;
    let mut orth = None;
    let mut offset = None;
    let mut pos = 0;
    let bytes = text.as_bytes();
    while pos < text.len() {
        while pos < text.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= text.len() {
            break;
        }
        let start = pos;
        let eq = text[start..]
            .find('=')
            .map(|i| start + i)
            .ok_or_else(|| err(line, col + start, "expected `key=value`"))?;
        let key = &text[start..eq];
        let vstart = eq + 1;
        let vend = if text[vstart..].starts_with('(') || text[vstart..].starts_with('[') {
            let close = if text[vstart..].starts_with('(') { ')' } else { ']' };
            text[vstart..]
                .find(close)
                .map(|i| vstart + i + 1)
                .ok_or_else(|| err(line, col + vstart, format!("missing `{}`", close)))?
        } else {
            text[vstart..].find(char::is_whitespace).map_or(text.len(), |i| vstart + i)
        };
        let value = &text[vstart..vend];
        let vcol = col + vstart;
        match key {
            "r" => ratio = Some(parse_rational(value).map_err(|m| err(line, vcol, m))?),
            "Q" => {
                let q = if value == "id" {
                    SignedPermutation::identity(dim)
                } else {
                    value.parse::<SignedPermutation>().map_err(|e| err(line, vcol, e.to_string()))?
                };
                if q.dim() != dim {
                    return Err(err(line, vcol, format!("expected a {}-dimensional permutation", dim)));
                }
                orth = Some(q);
            }
            "b" => {
                let inner = value
                    .strip_prefix('(')
                    .and_then(|v| v.strip_suffix(')'))
                    .ok_or_else(|| err(line, vcol, "expected `(<rat>,...)`"))?;
                let mut coords = Vec::new();
                let mut offset_in = 1;
                for part in inner.split(',') {
                    coords.push(parse_rational(part).map_err(|m| err(line, vcol + offset_in, m))?);
                    offset_in += part.len() + 1;
                }
                if coords.len() != dim {
                    return Err(err(line, vcol, format!("expected {} coordinates, found {}", dim, coords.len())));
                }
                offset = Some(Point::new(coords));
            }
            other => return Err(err(line, col + start, format!("unknown map field `{}`", other))),
        }
        pos = vend;
    }
    let ratio = ratio.ok_or_else(|| err(line, col, "missing `r=`"))?;
    let orth = orth.unwrap_or_else(|| SignedPermutation::identity(dim));
    let offset = offset.ok_or_else(|| err(line, col, "missing `b=`"))?;
    SimilarityMap::new(ratio, orth, offset).map_err(|e| err(line, col, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fractafold_core::arith::rat;

    #[test]
    fn presets_parse() {
        assert_eq!("dyadic".parse::<Preset>(), Ok(Preset::Dyadic));
        assert_eq!("simplex:3:2/5".parse::<Preset>(), Ok(Preset::Simplex { n: 3, r: rat(2, 5) }));
        assert!("simplex:1:1/2".parse::<Preset>().is_err());
        assert!("simplex:2:0.5".parse::<Preset>().is_err());
        assert!("cantor".parse::<Preset>().is_err());
        assert!(Preset::Simplex { n: 2, r: rat(3, 2) }.load().is_err());
    }

    #[test]
    fn config_round() {
        let text = "# comment\ndim 1\nmaps 2\nmap r=1/3 Q=[-1] b=(1/3)\nmap r=1/3 Q=id b=(2/3)\n";
        let sys = parse_config(text).unwrap();
        assert_eq!(sys.system.len(), 2);
        let (lo, hi) = sys.system.bounding_box();
        assert_eq!((lo.coord(0).clone(), hi.coord(0).clone()), (rat(0, 1), rat(1, 1)));
    }

    #[test]
    fn config_errors_point_at_the_problem() {
        let e = parse_config("dim 1\nmap r=1/3 b=(1/x)\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 14));
        let e = parse_config("dim 2\nmap r=3/2 b=(0,0)\nmap r=1/2 b=(1,0)\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("dimension 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_config("dim 1\nmaps 3\nmap r=1/2 b=(0)\nmap r=1/2 b=(1/2)\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("map r=1/2 b=(0)\n").unwrap_err();
        assert!(e.message.contains("dim"));
        let e = parse_config("dim 1\nmap r=1/2 Q=[+1,+2] b=(0)\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 13));
    }
}
