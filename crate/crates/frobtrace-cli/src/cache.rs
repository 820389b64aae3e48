//! Content-addressed census cache. Each census lives in one file named by
//! (family, variant, q, file format version, normalization), so a change to
//! the format or to the normalizing group order produces a fresh name
//! instead of a stale hit.

use std::fs;
use std::path::{Path, PathBuf};

use frobtrace::census::{
    build_census_g3, family_normalization, Census, CensusError, FamilyTag, G3Census,
    FORMAT_VERSION,
};

use crate::errors::{io_err, CliError};

pub struct CensusCache {
    dir: PathBuf,
}

impl CensusCache {
    pub fn new(dir: PathBuf) -> CensusCache {
        CensusCache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File name for a census. `classes` marks the isomorphism-class
    /// flavor, whose records carry per-class automorphism orders.
    pub fn file_name(family: FamilyTag, classes: bool, q: u64) -> Result<String, CliError> {
        let norm = family_normalization(family, q)?;
        let variant = if classes { "-classes" } else { "" };
        Ok(format!(
            "{family}{variant}-q{q}-v{FORMAT_VERSION}-n{norm}.census"
        ))
    }

    pub fn path_for(&self, family: FamilyTag, classes: bool, q: u64) -> Result<PathBuf, CliError> {
        Ok(self.dir.join(Self::file_name(family, classes, q)?))
    }

    /// Loads the cached census or builds and stores it. Cache notes go to
    /// stderr so reports on stdout stay byte-stable across cache states.
    pub fn load_or_build(
        &self,
        family: FamilyTag,
        classes: bool,
        q: u64,
        build: impl FnOnce() -> Result<Census, CensusError>,
    ) -> Result<Census, CliError> {
        let path = self.path_for(family, classes, q)?;
        if path.exists() {
            return self.load_checked(&path, family, q);
        }
        eprintln!(
            "cache miss: building {family} census at q = {q} (prebuild with \
             `frobtrace census --family {family} --q {q}{}`)",
            if classes { " --classes" } else { "" }
        );
        let census = build()?;
        self.store(&census, &path)?;
        Ok(census)
    }

    fn load_checked(&self, path: &Path, family: FamilyTag, q: u64) -> Result<Census, CliError> {
        let census = Census::load(path)?;
        if census.family != family || census.q != q {
            return Err(CliError::Io(format!(
                "cache file {} holds a {} census at q = {}, expected {family} at q = {q}",
                path.display(),
                census.family,
                census.q
            )));
        }
        Ok(census)
    }

    /// Saves under a temporary name and renames into place, so a crash
    /// never leaves a half-written file behind the content-addressed name.
    pub fn store(&self, census: &Census, path: &Path) -> Result<(), CliError> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io_err("creating cache directory", e))?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        census.save(&tmp)?;
        fs::rename(&tmp, path).map_err(|e| io_err("moving census into the cache", e))
    }

    /// The two genus-3 strata are enumerated in one pass; cache them as a
    /// pair and rebuild both when either file is missing.
    pub fn g3_pair(&self, q: u64) -> Result<G3Census, CliError> {
        let quartic_path = self.path_for(FamilyTag::G3Quartic, true, q)?;
        let hyp_path = self.path_for(FamilyTag::G3Hyp, true, q)?;
        if quartic_path.exists() && hyp_path.exists() {
            return Ok(G3Census {
                quartic: self.load_checked(&quartic_path, FamilyTag::G3Quartic, q)?,
                hyperelliptic: self.load_checked(&hyp_path, FamilyTag::G3Hyp, q)?,
            });
        }
        eprintln!(
            "cache miss: building genus-3 censuses at q = {q} (prebuild with \
             `frobtrace census --family g3 --q {q} --classes`)"
        );
        let pair = build_census_g3(q, true)?;
        self.store(&pair.quartic, &quartic_path)?;
        self.store(&pair.hyperelliptic, &hyp_path)?;
        Ok(pair)
    }
}
