//! Command implementations: census building and verification, trace
//! reports, q-expansion tables, congruence checks, and Picard reports.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use frobtrace::census::{
    build_census_g1, build_census_g2, build_census_g2_opts, build_census_g3, build_census_picard,
    Census, CensusError, FamilyTag, Genus2BuildOptions, FORMAT_VERSION,
};
use frobtrace::hecke::{
    harder_check_deg2, harder_check_deg3, is_prime, parse_eigenvalue_table, trace_t_siegel2,
    trace_t_siegel3, trace_t_sl2, weight_2_1_14_table, CongruenceReport, Deg3Congruence,
    Degree2Data, Degree3Data, TraceReport,
};
use frobtrace::motives::dim_cusp_sl2;
use frobtrace::picard::{
    euler_comparison, phi_reference_table, picard_ec_trace, picard_sixth_power_probe,
    ComparisonFamily, PicardWeight,
};
use frobtrace::qexpansion::{hecke_eigen, hecke_trace};
use serde_json::json;

use crate::cache::CensusCache;
use crate::errors::{io_err, CliError};
use crate::output::{emit_record, emit_table, Format, Record};
use crate::{
    CensusArgs, CompareFamily, CongruenceArgs, PicardArgs, PicardCommand, QexpArgs, RunConfig,
    TraceArgs,
};

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

fn require<T: Copy>(value: Option<T>, flag: &str, context: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{context} requires {flag}")))
}

fn forbid(absent: bool, flag: &str, context: &str) -> Result<(), CliError> {
    if absent {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{flag} does not apply to {context}"
        )))
    }
}

// --- censuses through the cache ---

pub fn g1_census(cache: &CensusCache, q: u64) -> Result<Census, CliError> {
    cache.load_or_build(FamilyTag::G1, false, q, || build_census_g1(q))
}

pub fn picard_census(cache: &CensusCache, q: u64) -> Result<Census, CliError> {
    cache.load_or_build(FamilyTag::Picard, false, q, || build_census_picard(q))
}

/// Censuses backing the degree-2 pipeline at q, cache-backed.
pub fn degree2_data(cache: &CensusCache, q: u64) -> Result<Degree2Data, CliError> {
    let g2 = cache.load_or_build(FamilyTag::G2, false, q, || build_census_g2(q, false))?;
    let g1 = g1_census(cache, q)?;
    let g1_sq = g1_census(cache, q * q)?;
    Ok(Degree2Data::from_parts(g2, g1, g1_sq))
}

/// Censuses backing the degree-3 pipeline at q, cache-backed. The genus-3
/// and genus-2 parts use the isomorphism-class flavor.
pub fn degree3_data(cache: &CensusCache, q: u64) -> Result<Degree3Data, CliError> {
    let g3 = cache.g3_pair(q)?;
    let g2 = cache.load_or_build(FamilyTag::G2, true, q, || build_census_g2(q, true))?;
    let g1 = g1_census(cache, q)?;
    let g1_sq = g1_census(cache, q * q)?;
    let g1_cube = g1_census(cache, q * q * q)?;
    Ok(Degree3Data::from_parts(g3, g2, g1, g1_sq, g1_cube))
}

// --- census command ---

struct CensusRow {
    family: FamilyTag,
    q: u64,
    classes: bool,
    entries: usize,
    normalization: u64,
    mass: String,
    path: String,
    status: &'static str,
}

pub fn cmd_census(config: &RunConfig, args: &CensusArgs) -> Result<(), CliError> {
    if args.family == "g3" {
        if args.out.is_some() {
            return Err(CliError::Usage(
                "--out writes a single file; pick g3_quartic or g3_hyp".into(),
            ));
        }
        forbid_shard_flags(args)?;
        let pair = build_census_g3(args.q, args.classes)?;
        let rows = vec![
            finalize_census(config, FamilyTag::G3Quartic, args.classes, &pair.quartic, None)?,
            finalize_census(
                config,
                FamilyTag::G3Hyp,
                args.classes,
                &pair.hyperelliptic,
                None,
            )?,
        ];
        emit_census(config.format, &rows);
        return Ok(());
    }
    let family: FamilyTag = args.family.parse().map_err(|e: String| {
        CliError::Usage(format!(
            "{e}; choose g1, g2, g3, g3_quartic, g3_hyp, or picard"
        ))
    })?;
    if args.classes && matches!(family, FamilyTag::G1 | FamilyTag::Picard) {
        return Err(CliError::Usage(format!(
            "--classes does not apply to {family}; its mass weighting is fixed"
        )));
    }
    if family != FamilyTag::G2 {
        forbid_shard_flags(args)?;
    }
    let out = args.out.as_deref();
    let row = match family {
        FamilyTag::G1 => finalize_census(config, family, false, &build_census_g1(args.q)?, out)?,
        FamilyTag::Picard => {
            finalize_census(config, family, false, &build_census_picard(args.q)?, out)?
        }
        FamilyTag::G2 => {
            finalize_census(config, family, args.classes, &build_g2(config, args)?, out)?
        }
        FamilyTag::G3Quartic | FamilyTag::G3Hyp => {
            let pair = build_census_g3(args.q, args.classes)?;
            let (selected, sibling, sibling_family) = if family == FamilyTag::G3Quartic {
                (pair.quartic, pair.hyperelliptic, FamilyTag::G3Hyp)
            } else {
                (pair.hyperelliptic, pair.quartic, FamilyTag::G3Quartic)
            };
            // The strata are enumerated together; park the sibling in the
            // cache when it is not already present.
            if out.is_none() {
                let sibling_path = config.cache.path_for(sibling_family, args.classes, args.q)?;
                if !sibling_path.exists() {
                    config.cache.store(&sibling, &sibling_path)?;
                }
            }
            finalize_census(config, family, args.classes, &selected, out)?
        }
    };
    emit_census(config.format, &[row]);
    Ok(())
}

fn forbid_shard_flags(args: &CensusArgs) -> Result<(), CliError> {
    if args.checkpoint_dir.is_some() || args.max_seconds.is_some() {
        return Err(CliError::Usage(
            "--checkpoint-dir and --max-seconds apply to the sharded g2 build only".into(),
        ));
    }
    Ok(())
}

/// Genus-2 build with shard checkpoints and a cooperative time budget.
fn build_g2(config: &RunConfig, args: &CensusArgs) -> Result<Census, CliError> {
    let variant = if args.classes { "g2-classes" } else { "g2" };
    let checkpoints = args.checkpoint_dir.clone().unwrap_or_else(|| {
        config
            .cache
            .dir()
            .join("checkpoints")
            .join(format!("{variant}-q{}", args.q))
    });
    fs::create_dir_all(&checkpoints).map_err(|e| io_err("creating checkpoint directory", e))?;
    let cancel = Arc::new(AtomicBool::new(false));
    if let Some(secs) = args.max_seconds {
        let flag = Arc::clone(&cancel);
        std::thread::spawn(move || {
            std::thread::sleep(std::time::Duration::from_secs(secs));
            eprintln!("time budget of {secs}s reached; cancelling at the next shard boundary");
            flag.store(true, Ordering::SeqCst);
        });
    }
    let opts = Genus2BuildOptions {
        checkpoint_dir: Some(checkpoints.clone()),
        cancel: Some(cancel),
    };
    let census = match build_census_g2_opts(args.q, args.classes, &opts) {
        Ok(census) => census,
        Err(CensusError::Cancelled) => {
            return Err(CliError::Io(format!(
                "build cancelled at a shard boundary; finished shards are kept in {} — \
                 re-run the same command to resume",
                checkpoints.display()
            )))
        }
        Err(e) => return Err(e.into()),
    };
    // Every shard is folded into the final file; the checkpoints are now
    // redundant.
    let _ = fs::remove_dir_all(&checkpoints);
    Ok(census)
}

/// Writes the census, or verifies it byte-for-byte against an existing
/// file at the same path. A mismatch is a verification failure.
fn write_and_verify(census: &Census, path: &Path) -> Result<&'static str, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| io_err("creating output directory", e))?;
        }
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    census.save(&tmp)?;
    let fresh = fs::read(&tmp).map_err(|e| io_err("reading back the fresh census", e))?;
    if path.exists() {
        let existing = fs::read(path).map_err(|e| io_err("reading the existing census", e))?;
        let _ = fs::remove_file(&tmp);
        if existing == fresh {
            Ok("verified")
        } else {
            Err(CliError::Verification(format!(
                "existing census file {} does not match the freshly built census; \
                 move it aside to accept the new result",
                path.display()
            )))
        }
    } else {
        fs::rename(&tmp, path).map_err(|e| io_err("moving census into place", e))?;
        Ok("written")
    }
}

fn finalize_census(
    config: &RunConfig,
    family: FamilyTag,
    classes: bool,
    census: &Census,
    out: Option<&Path>,
) -> Result<CensusRow, CliError> {
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => config.cache.path_for(family, classes, census.q)?,
    };
    let status = write_and_verify(census, &path)?;
    Ok(CensusRow {
        family,
        q: census.q,
        classes,
        entries: census.entries.len(),
        normalization: census.normalization,
        mass: census.total_mass().to_string(),
        path: path.display().to_string(),
        status,
    })
}

fn emit_census(format: Format, rows: &[CensusRow]) {
    match format {
        Format::Text => {
            for r in rows {
                println!(
                    "census {}{} q={}: {} Frobenius classes, normalization {}, mass {}, \
                     format v{}; {} {}",
                    r.family,
                    if r.classes {
                        " (isomorphism classes)"
                    } else {
                        ""
                    },
                    r.q,
                    r.entries,
                    r.normalization,
                    r.mass,
                    FORMAT_VERSION,
                    r.status,
                    r.path
                );
            }
        }
        _ => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.family.to_string(),
                        r.q.to_string(),
                        r.classes.to_string(),
                        r.entries.to_string(),
                        r.normalization.to_string(),
                        r.mass.clone(),
                        FORMAT_VERSION.to_string(),
                        r.status.to_string(),
                        r.path.clone(),
                    ]
                })
                .collect();
            emit_table(
                format,
                "census report",
                &[
                    "family",
                    "q",
                    "classes",
                    "entries",
                    "normalization",
                    "mass",
                    "format_version",
                    "status",
                    "path",
                ],
                &table,
            );
        }
    }
}

// --- trace command ---

pub fn cmd_trace(config: &RunConfig, args: &TraceArgs) -> Result<(), CliError> {
    let report = match args.degree {
        1 => {
            let k = require(args.k, "--k", "a degree-1 trace")?;
            forbid(args.j.is_none(), "--j", "degree 1")?;
            forbid(
                args.a.is_none() && args.b.is_none() && args.c.is_none(),
                "--a/--b/--c",
                "degree 1",
            )?;
            let g1 = g1_census(&config.cache, args.q)?;
            let trace = trace_t_sl2(k, args.q, &g1)?;
            let dim = dim_cusp_sl2(k).ok().and_then(|d| u32::try_from(d).ok());
            TraceReport {
                degree: 1,
                weight: vec![k],
                q: args.q,
                trace,
                dim_hint: dim,
                census_version: FORMAT_VERSION,
                formula: "degree-1 trace identity",
                raw_frobenius: !is_prime(args.q),
            }
        }
        2 => {
            let j = require(args.j, "--j", "a degree-2 trace")?;
            let k = require(args.k, "--k", "a degree-2 trace")?;
            forbid(
                args.a.is_none() && args.b.is_none() && args.c.is_none(),
                "--a/--b/--c",
                "degree 2",
            )?;
            let data = degree2_data(&config.cache, args.q)?;
            trace_t_siegel2(j, k, args.q, &data)?
        }
        3 => {
            let a = require(args.a, "--a", "a degree-3 trace")?;
            let b = require(args.b, "--b", "a degree-3 trace")?;
            let c = require(args.c, "--c", "a degree-3 trace")?;
            forbid(
                args.j.is_none() && args.k.is_none(),
                "--j/--k",
                "degree 3 (use the local-system weight --a/--b/--c)",
            )?;
            let data = degree3_data(&config.cache, args.q)?;
            trace_t_siegel3(a, b, c, args.q, &data)?
        }
        d => {
            return Err(CliError::Usage(format!(
                "--degree must be 1, 2, or 3, got {d}"
            )))
        }
    };
    let mut record = Record::new();
    record.push("degree", report.degree);
    record.push(
        "weight",
        report
            .weight
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    record.push("q", report.q);
    record.push("trace", &report.trace);
    record.push(
        "dim",
        report.dim_hint.map(|d| d.to_string()).unwrap_or_default(),
    );
    record.push("raw_frobenius", report.raw_frobenius);
    record.push("formula", report.formula);
    record.push("census_format_version", report.census_version);
    emit_record(config.format, &report.to_string(), &record);
    Ok(())
}

// --- qexp command ---

pub fn cmd_qexp(config: &RunConfig, args: &QexpArgs) -> Result<(), CliError> {
    let dim = usize::try_from(dim_cusp_sl2(args.k)?).unwrap_or(0);
    let mut rows = Vec::new();
    for p in primes_up_to(args.p_max) {
        // Enough coefficients for the Hecke action on the whole basis.
        let precision = (dim + 1) * p as usize + 2;
        if args.eigen {
            let eigen = hecke_eigen(args.k, p, precision)?;
            let joined = if eigen.is_empty() {
                "-".to_string()
            } else {
                eigen
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ; ")
            };
            rows.push(vec![p.to_string(), joined]);
        } else {
            rows.push(vec![
                p.to_string(),
                hecke_trace(args.k, p, precision)?.to_string(),
            ]);
        }
    }
    let what = if args.eigen { "eigenvalues" } else { "trace" };
    emit_table(
        config.format,
        &format!("{what} of T(p) on S_{} from q-expansions", args.k),
        &["p", what],
        &rows,
    );
    Ok(())
}

// --- congruence command ---

pub fn cmd_congruence(config: &RunConfig, args: &CongruenceArgs) -> Result<(), CliError> {
    match args.degree {
        2 => {
            forbid(
                args.a.is_none() && args.b.is_none() && args.c.is_none(),
                "--a/--b/--c",
                "the degree-2 check",
            )?;
            forbid(args.g_weight.is_none(), "--g-weight", "the degree-2 check")?;
            forbid(args.table.is_none(), "--table", "the degree-2 check")?;
            let j = args.j.unwrap_or(4);
            let k = args.k.unwrap_or(10);
            let modulus = args.modulus.unwrap_or(41);
            let f_weight = args.f_weight.unwrap_or(22);
            let p_max = args.p_max.unwrap_or(13);
            let mut data = Vec::new();
            for p in primes_up_to(p_max) {
                data.push(degree2_data(&config.cache, p)?);
            }
            let report = harder_check_deg2(j, k, modulus, f_weight, p_max, &data)?;
            emit_congruence(
                config.format,
                &format!("S_{{{j},{k}}} vs weight-{f_weight} elliptic eigenvalues mod {modulus}"),
                &report,
            );
            finish_congruence(&report, modulus)
        }
        3 => {
            forbid(
                args.j.is_none() && args.k.is_none(),
                "--j/--k",
                "the degree-3 check (use the local-system weight --a/--b/--c)",
            )?;
            let weight = (
                args.a.unwrap_or(13),
                args.b.unwrap_or(11),
                args.c.unwrap_or(10),
            );
            let modulus = args.modulus.unwrap_or(199);
            let f_weight = args.f_weight.unwrap_or(12);
            let g_weight = args.g_weight.unwrap_or(30);
            let p_max = args.p_max.unwrap_or(17);
            let table = match &args.table {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| io_err("reading the eigenvalue table", e))?;
                    parse_eigenvalue_table(&text)?
                }
                None => weight_2_1_14_table(),
            };
            let check = Deg3Congruence {
                weight,
                modulus,
                f_weight,
                g_weight,
            };
            let report = harder_check_deg3(&check, &table, p_max)?;
            emit_congruence(
                config.format,
                &format!(
                    "degree-3 weight ({},{},{}) vs weights {f_weight} and {g_weight} mod {modulus}",
                    weight.0, weight.1, weight.2
                ),
                &report,
            );
            finish_congruence(&report, modulus)
        }
        d => Err(CliError::Usage(format!(
            "--degree must be 2 or 3, got {d}"
        ))),
    }
}

fn emit_congruence(format: Format, title: &str, report: &CongruenceReport) {
    if format == Format::Text {
        println!("# {title}");
        print!("{report}");
    } else {
        let rows: Vec<Vec<String>> = report
            .verdicts
            .iter()
            .map(|v| vec![v.p.to_string(), v.norm.to_string(), v.pass.to_string()])
            .collect();
        emit_table(format, title, &["p", "norm", "pass"], &rows);
    }
}

fn finish_congruence(report: &CongruenceReport, modulus: u64) -> Result<(), CliError> {
    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "congruence mod {modulus} fails"
        )))
    }
}

// --- picard command ---

pub fn cmd_picard(config: &RunConfig, args: &PicardArgs) -> Result<(), CliError> {
    match &args.command {
        PicardCommand::Trace { q, a, b, det } => {
            let census = picard_census(&config.cache, *q)?;
            let weight = PicardWeight::new(*a, *b, *det);
            let value = picard_ec_trace(&weight, &census, *q)?;
            let lambda = weight.lambda();
            let mut record = Record::new();
            record.push("q", q);
            record.push("a", weight.a());
            record.push("b", weight.b());
            record.push("det_power", weight.det_power());
            record.push(
                "lambda",
                format!("{},{},{}", lambda.0, lambda.1, lambda.2),
            );
            record.push("trace", &value);
            emit_record(
                config.format,
                &format!("eigenspace trace {weight} at q = {q}: {value}"),
                &record,
            );
            Ok(())
        }
        PicardCommand::Probe { q } => {
            let census = picard_census(&config.cache, *q)?;
            let report = picard_sixth_power_probe(&census, *q)?;
            match config.format {
                Format::Text => println!("{report}"),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .values
                        .iter()
                        .map(|(v, n)| vec![v.to_string(), n.to_string()])
                        .collect();
                    emit_table(Format::Csv, "", &["value", "classes"], &rows);
                }
                Format::Json => {
                    let values: Vec<serde_json::Value> = report
                        .values
                        .iter()
                        .map(|(v, n)| {
                            json!({"value": v.to_string(), "classes": n.to_string()})
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "q": q.to_string(),
                            "constant": report.constant.to_string(),
                            "values": values,
                        })
                    );
                }
            }
            Ok(())
        }
        PicardCommand::Compare {
            q,
            family,
            k,
            no_refs,
        } => {
            let census = picard_census(&config.cache, *q)?;
            let fam = match family {
                CompareFamily::Scalar => ComparisonFamily::Scalar,
                CompareFamily::Vector => ComparisonFamily::VectorValued,
            };
            let table;
            let refs = if *no_refs {
                None
            } else {
                table = phi_reference_table();
                Some(&table)
            };
            let cmp = euler_comparison(fam, *k, *q, &census, refs)?;
            let mut record = Record::new();
            record.push(
                "family",
                match family {
                    CompareFamily::Scalar => "scalar",
                    CompareFamily::Vector => "vector",
                },
            );
            record.push("k", k);
            record.push("weight", cmp.weight);
            record.push("q", q);
            record.push("ec_trace", &cmp.ec_trace);
            record.push(
                "l_multiplicity",
                format!(
                    "{},{},{}",
                    cmp.l_multiplicity.0, cmp.l_multiplicity.1, cmp.l_multiplicity.2
                ),
            );
            record.push(
                "l_exponents",
                format!("{},{}", cmp.l_exponents.0, cmp.l_exponents.1),
            );
            record.push("cusp_label", &cmp.cusp_label);
            record.push(
                "reference_alpha",
                cmp.reference
                    .as_ref()
                    .map(|r| r.alpha.to_string())
                    .unwrap_or_default(),
            );
            record.push(
                "reference_value",
                cmp.reference
                    .as_ref()
                    .map(|r| r.value.to_string())
                    .unwrap_or_default(),
            );
            record.push("note", "no agreement is asserted");
            emit_record(config.format, &cmp.to_string(), &record);
            Ok(())
        }
    }
}
