//! Process-level error type carrying the exit code contract:
//! 1 verification failure, 2 usage, 3 io, 4 unsupported input.

use std::fmt;

use frobtrace::census::CensusError;
use frobtrace::hecke::HeckeError;
use frobtrace::localsys::LocalSysError;
use frobtrace::motives::MotivesError;
use frobtrace::picard::PicardError;
use frobtrace::qexpansion::QExpansionError;

#[derive(Debug)]
pub enum CliError {
    /// A computed result contradicts a pinned value or a self-check.
    Verification(String),
    /// The command line itself is malformed.
    Usage(String),
    /// Reading or writing an artifact failed.
    Io(String),
    /// Well-formed request outside the supported input range.
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CliError::Verification(m)
        | CliError::Usage(m)
        | CliError::Io(m)
        | CliError::Unsupported(m)) = self;
        f.write_str(m)
    }
}

pub fn io_err(context: &str, err: std::io::Error) -> CliError {
    CliError::Io(format!("{context}: {err}"))
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> CliError {
        match &e {
            CensusError::Unsupported { .. } => CliError::Unsupported(e.to_string()),
            CensusError::Io(_) => CliError::Io(e.to_string()),
            CensusError::Corrupt { .. } | CensusError::VersionMismatch { .. } => CliError::Io(
                format!("{e} (delete the offending cache file and re-run)"),
            ),
            CensusError::Cancelled => CliError::Io(
                "build cancelled at a shard boundary; finished checkpoints are kept, \
                 re-run the same command to resume"
                    .into(),
            ),
            // A builder invariant failed: the data cannot be trusted.
            CensusError::Internal(_) => CliError::Verification(e.to_string()),
        }
    }
}

impl From<LocalSysError> for CliError {
    fn from(e: LocalSysError) -> CliError {
        match &e {
            // Non-integral mass-weighted sums mean the censuses are wrong.
            LocalSysError::NonIntegralSum { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Unsupported(e.to_string()),
        }
    }
}

impl From<MotivesError> for CliError {
    fn from(e: MotivesError) -> CliError {
        CliError::Unsupported(e.to_string())
    }
}

impl From<QExpansionError> for CliError {
    fn from(e: QExpansionError) -> CliError {
        CliError::Unsupported(e.to_string())
    }
}

impl From<HeckeError> for CliError {
    fn from(e: HeckeError) -> CliError {
        match e {
            HeckeError::Census(inner) => inner.into(),
            HeckeError::LocalSys(inner) => inner.into(),
            HeckeError::Motives(inner) => inner.into(),
            HeckeError::QExpansion(inner) => inner.into(),
            HeckeError::MissingCensus(q) => CliError::Unsupported(format!(
                "no census available at q = {q}; build one first with `frobtrace census`"
            )),
            HeckeError::Internal(_) => CliError::Verification(e.to_string()),
            other => CliError::Unsupported(other.to_string()),
        }
    }
}

impl From<PicardError> for CliError {
    fn from(e: PicardError) -> CliError {
        match e {
            PicardError::Census(inner) => inner.into(),
            PicardError::BadParameter(_) | PicardError::TableParse { .. } => {
                CliError::Unsupported(e.to_string())
            }
            // Family, pairing, oracle, and integrality violations all mean
            // the census data fails its own invariants.
            _ => CliError::Verification(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_match_the_contract() {
        assert_eq!(CliError::Verification(String::new()).exit_code(), 1);
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Io(String::new()).exit_code(), 3);
        assert_eq!(CliError::Unsupported(String::new()).exit_code(), 4);
    }

    #[test]
    fn census_errors_map_to_their_codes() {
        let unsupported = CensusError::Unsupported {
            family: frobtrace::census::FamilyTag::G1,
            q: 6,
            reason: "not a prime power".into(),
        };
        assert_eq!(CliError::from(unsupported).exit_code(), 4);
        assert_eq!(CliError::from(CensusError::Cancelled).exit_code(), 3);
        assert_eq!(
            CliError::from(CensusError::Internal("bad mass".into())).exit_code(),
            1
        );
        assert_eq!(
            CliError::from(CensusError::VersionMismatch {
                found: 9,
                supported: 1
            })
            .exit_code(),
            3
        );
    }
}
