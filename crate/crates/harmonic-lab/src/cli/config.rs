//! Run configuration shared by every subcommand.

use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::clifford::FamilyMember;
use crate::error::{Error, Result};
use crate::heatinv::ExpansionMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// `l:a,b;a,b;..`; every member shares `l` and `a + b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    pub l: usize,
    pub members: Vec<(usize, usize)>,
}

impl Family {
    pub fn members(&self) -> Vec<FamilyMember> {
        self.members.iter().map(|&(a, b)| FamilyMember { l: self.l, a, b }).collect()
    }

    /// Dimension `(a + b) n_l + l + 1` of the Damek-Ricci members.
    pub fn dimension(&self) -> usize {
        let (a, b) = self.members[0];
        let n_l = if self.l == 1 { 2 } else { 4 };
        (a + b) * n_l + self.l + 1
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidArgument(format!("family '{s}': {why}"));
        let (l, rest) = s.split_once(':').ok_or_else(|| bad("expected l:a,b;a,b"))?;
        let l: usize = l.trim().parse().map_err(|_| bad("l is not an integer"))?;
        if !(1..=3).contains(&l) {
            return Err(Error::UnsupportedCenterDimension(l));
        }
        let members = rest
            .split(';')
            .map(str::trim)
            .filter(|m| !m.is_empty())
            .map(|m| {
                let (a, b) = m.split_once(',').ok_or_else(|| bad("member is not a,b"))?;
                let a: usize = a.trim().parse().map_err(|_| bad("a is not an integer"))?;
                let b: usize = b.trim().parse().map_err(|_| bad("b is not an integer"))?;
                if a + b == 0 {
                    return Err(Error::InvalidMultiplicity);
                }
                Ok((a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        let Some(&(a0, b0)) = members.first() else {
            return Err(bad("empty member list"));
        };
        if members.iter().any(|&(a, b)| a + b != a0 + b0) {
            return Err(Error::FamilyMismatch(format!("members of '{s}' differ in a + b")));
        }
        Ok(Family { l, members })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub family: Family,
    pub seed: u64,
    pub tol: f64,
    pub mode: ExpansionMode,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_standard_family() {
        let f: Family = "3:2,0;1,1".parse().unwrap();
        assert_eq!(f, Family { l: 3, members: vec![(2, 0), (1, 1)] });
        assert_eq!(f.dimension(), 12);
    }

    #[test]
    fn rejects_malformed_families() {
        assert!(matches!("3:".parse::<Family>(), Err(Error::InvalidArgument(_))));
        assert!(matches!("3:2,0;1,0".parse::<Family>(), Err(Error::FamilyMismatch(_))));
        assert_eq!("4:1,0".parse::<Family>(), Err(Error::UnsupportedCenterDimension(4)));
        assert_eq!("1:0,0".parse::<Family>(), Err(Error::InvalidMultiplicity));
        assert!("x:1,0".parse::<Family>().is_err());
    }
}
