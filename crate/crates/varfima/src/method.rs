//! Estimator method labels shared by the CLI and Monte Carlo tables.

use serde::{Deserialize, Serialize};

/// The four estimator variants: ordinary periodogram (`Sh`), cosine-bell
/// tapered periodogram (`TSh`), Bartlett-smoothed periodogram with the
/// zero-frequency term excluded (`SSh`) and included (`SSh*`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Sh,
    TSh,
    SSh,
    SShStar,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Sh, Method::TSh, Method::SSh, Method::SShStar];

    /// Display label used in result tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Sh => "Sh",
            Method::TSh => "TSh",
            Method::SSh => "SSh",
            Method::SShStar => "SSh*",
        }
    }

    /// Flag value accepted on the command line.
    pub fn cli_token(self) -> &'static str {
        match self {
            Method::Sh => "sh",
            Method::TSh => "tsh",
            Method::SSh => "ssh",
            Method::SShStar => "ssh-star",
        }
    }

    pub fn parse_token(s: &str) -> Option<Method> {
        match s.to_ascii_lowercase().as_str() {
            "sh" => Some(Method::Sh),
            "tsh" => Some(Method::TSh),
            "ssh" => Some(Method::SSh),
            "ssh-star" | "ssh*" | "sshstar" => Some(Method::SShStar),
            _ => None,
        }
    }

    /// Whether the method smooths the periodogram (and therefore needs a
    /// window half-width).
    pub fn uses_smoothing(self) -> bool {
        matches!(self, Method::SSh | Method::SShStar)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl TryFrom<String> for Method {
    type Error = String;

    fn try_from(value: String) -> std::result::Result<Self, Self::Error> {
        Method::parse_token(&value)
            .ok_or_else(|| format!("unknown method '{value}' (expected sh, tsh, ssh or ssh-star)"))
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.cli_token().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse_token(m.cli_token()), Some(m));
        }
        assert_eq!(Method::parse_token("SSH*"), Some(Method::SShStar));
        assert_eq!(Method::parse_token("nope"), None);
    }
}
