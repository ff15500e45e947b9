//! Text form of interval and box literals: `[lo,hi]` and
//! `[lo1,hi1]x[lo2,hi2]x...`, plain decimal text with no locale formatting.

use std::fmt;
use std::str::FromStr;

use super::{BoxSet, ConvexSet, Interval, SetError};

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Display for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, axis) in self.axes.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{axis}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ConvexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexSet::Interval(a) => write!(f, "{a}"),
            ConvexSet::Box(a) => write!(f, "{a}"),
            ConvexSet::Support(a) => {
                write!(f, "support(")?;
                for (i, v) in a.values().iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn literal_err(text: &str, reason: impl Into<String>) -> SetError {
    SetError::Literal {
        text: text.to_owned(),
        reason: reason.into(),
    }
}

impl FromStr for Interval {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, SetError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| literal_err(s, "expected [lo,hi]"))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| literal_err(s, "expected two comma-separated endpoints"))?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|e| literal_err(s, format!("bad lower endpoint: {e}")))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|e| literal_err(s, format!("bad upper endpoint: {e}")))?;
        Interval::new(lo, hi)
    }
}

impl FromStr for ConvexSet {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, SetError> {
        let parts: Vec<&str> = s.trim().split('x').collect();
        if parts.len() == 1 {
            return parts[0].parse::<Interval>().map(ConvexSet::Interval);
        }
        let axes = parts
            .iter()
            .map(|p| p.parse::<Interval>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConvexSet::Box(BoxSet::new(axes)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_roundtrip() {
        let a: Interval = "[0.5,1]".parse().unwrap();
        assert_eq!(a, Interval::new(0.5, 1.0).unwrap());
        assert_eq!(a.to_string(), "[0.5,1]");
        let b: Interval = "[-1.25e-3, 7]".parse().unwrap();
        assert_eq!(b.lo, -1.25e-3);
    }

    #[test]
    fn box_roundtrip() {
        let b: ConvexSet = "[0,1]x[-1,0.5]".parse().unwrap();
        assert_eq!(b.to_string(), "[0,1]x[-1,0.5]");
        assert_eq!(b.dim(), 2);
    }

    #[test]
    fn rejects_malformed() {
        assert!("[1,0]".parse::<Interval>().is_err());
        assert!("0,1".parse::<Interval>().is_err());
        assert!("[a,b]".parse::<Interval>().is_err());
        assert!("[0,1]x".parse::<ConvexSet>().is_err());
    }
}
