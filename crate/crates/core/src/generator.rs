use core::fmt;
use core::str::FromStr;

/// The ten Bäcklund generators, named as on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// w_{κ0}
    Wk0,
    /// w_{κ1}
    Wk1,
    /// w_{κ∞}
    WkInf,
    /// w_{θ1}
    Wt1,
    /// w_{θ2}
    Wt2,
    /// w_{α0}
    Wa0,
    S1,
    S2,
    S3,
    S4,
}

impl Generator {
    pub const ALL: [Generator; 10] = [
        Generator::Wk0,
        Generator::Wk1,
        Generator::WkInf,
        Generator::Wt1,
        Generator::Wt2,
        Generator::Wa0,
        Generator::S1,
        Generator::S2,
        Generator::S3,
        Generator::S4,
    ];

    /// Generators whose lattice action is tabulated on the 10-point model.
    pub const X10: [Generator; 9] = [
        Generator::Wk0,
        Generator::Wk1,
        Generator::WkInf,
        Generator::Wt1,
        Generator::Wt2,
        Generator::S1,
        Generator::S2,
        Generator::S3,
        Generator::S4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Wk0 => "wk0",
            Generator::Wk1 => "wk1",
            Generator::WkInf => "wkI",
            Generator::Wt1 => "wt1",
            Generator::Wt2 => "wt2",
            Generator::Wa0 => "wa0",
            Generator::S1 => "s1",
            Generator::S2 => "s2",
            Generator::S3 => "s3",
            Generator::S4 => "s4",
        }
    }

    /// Conventional mathematical name.
    pub fn pretty(self) -> &'static str {
        match self {
            Generator::Wk0 => "w_κ0",
            Generator::Wk1 => "w_κ1",
            Generator::WkInf => "w_κ∞",
            Generator::Wt1 => "w_θ1",
            Generator::Wt2 => "w_θ2",
            Generator::Wa0 => "w_α0",
            Generator::S1 => "σ1",
            Generator::S2 => "σ2",
            Generator::S3 => "σ3",
            Generator::S4 => "σ4",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown generator `{0}` (expected one of wk0, wk1, wkI, wt1, wt2, wa0, s1, s2, s3, s4)")]
pub struct UnknownGenerator(pub alloc::string::String);

impl FromStr for Generator {
    type Err = UnknownGenerator;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Generator::ALL.iter().copied().find(|g| g.name() == s).ok_or_else(|| UnknownGenerator(s.into()))
    }
}

/// Parse a comma separated word such as `"wk0,s1,wa0"`. The empty string is
/// the empty word.
pub fn parse_word(s: &str) -> Result<alloc::vec::Vec<Generator>, UnknownGenerator> {
    if s.trim().is_empty() {
        return Ok(alloc::vec::Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for g in Generator::ALL {
            assert_eq!(g.name().parse::<Generator>().unwrap(), g);
        }
        assert!("wk2".parse::<Generator>().is_err());
        assert_eq!(parse_word("wt1, wt1").unwrap(), [Generator::Wt1, Generator::Wt1]);
        assert!(parse_word("").unwrap().is_empty());
    }
}
