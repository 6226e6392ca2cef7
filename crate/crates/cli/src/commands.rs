//! Subcommands of the `tcurve` binary.
//!
//! Each subcommand writes its report to the given writer and returns an
//! error when it fails; verification subcommands return
//! [`CliError::Check`] when they find mismatches.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use tcurve_core::census::{self, CensusOptions, CensusReport};
use tcurve_core::document::PatchworkFile;
use tcurve_core::families::Family;
use tcurve_core::regularity::verify_lifting;
use tcurve_core::search::{self, SearchConfig};
use tcurve_core::triangulation::TriangulationFile;
use tcurve_core::{catalog, enumerate_schemes, parse_scheme, polynomial, svg, Patchwork, SignDistribution};

use crate::error::{read, write, CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "tcurve", version, about = "Combinatorial patchworking of T-curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the shipped triangulations.
    Catalog,
    /// Print the real scheme of a patchwork file.
    Scheme {
        file: PathBuf,
        /// Print the full evaluation as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Draw a patchwork file as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Check the liftings of the shipped triangulations, or of the given
    /// triangulation files.
    VerifyLiftings { files: Vec<PathBuf> },
    /// Check a `scheme,triangulation,signs` table.
    VerifyTable { csv: PathBuf },
    /// Histogram of real schemes over all (or sampled) sign classes.
    Census {
        #[arg(long)]
        degree: u32,
        /// Catalog key or constructor key such as `honeycomb:5`.
        #[arg(long)]
        triangulation: String,
        /// Worker threads (0 uses every core).
        #[arg(long, env = "TCURVE_JOBS", default_value_t = 0)]
        jobs: usize,
        /// CSV output; a JSON mirror is written next to it.
        #[arg(long)]
        out: PathBuf,
        /// Sample this many classes instead of enumerating all of them.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Checkpoint file for resumable exhaustive runs.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Look for sign distributions realizing real schemes.
    Search {
        #[arg(long)]
        degree: u32,
        /// `all`, or schemes separated by `;`.
        #[arg(long, default_value = "all")]
        targets: String,
        /// Kernel evaluations allowed.
        #[arg(long, default_value_t = 20_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Triangulation keys separated by `,`; defaults to the catalog
        /// entries of the degree, or the honeycomb triangulation.
        #[arg(long)]
        triangulations: Option<String>,
        /// Write the realizer table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a family's closed-form scheme with the computed one.
    Families {
        /// Family name, or `all`.
        #[arg(long)]
        name: String,
        #[arg(long)]
        degree: u32,
    },
    /// Print the polynomial of a patchwork file.
    ExportPoly {
        file: PathBuf,
        /// Substitute this rational value `p/q` for `t`.
        #[arg(long)]
        t: Option<String>,
    },
    /// Run the HTTP service on localhost.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn load(path: &Path) -> CliResult<PatchworkFile> {
    Ok(PatchworkFile::parse(&read(path)?)?)
}

fn evaluate(path: &Path) -> CliResult<Patchwork> {
    let (t, s) = load(path)?.resolve()?;
    Ok(Patchwork::new(&t, s)?)
}

fn io(err: std::io::Error) -> CliError {
    CliError::Service(err)
}

/// Runs one subcommand.
pub fn run(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Catalog => catalog_cmd(out),
        Command::Scheme { file, json } => {
            let pw = evaluate(&file)?;
            if json {
                let view = crate::service::EvaluationView::of(&pw);
                let text = serde_json::to_string_pretty(&view).map_err(tcurve_core::Error::from)?;
                writeln!(out, "{text}").map_err(io)
            } else {
                let s = pw.scheme().stats();
                writeln!(out, "{}", pw.scheme()).map_err(io)?;
                writeln!(out, "loops {} ovals {} p {} n {}", s.loops, s.p + s.n, s.p, s.n).map_err(io)
            }
        }
        Command::Render { file, svg: target } => {
            let pw = evaluate(&file)?;
            write(&target, &svg::render(&pw))?;
            writeln!(out, "{} -> {}", pw.scheme(), target.display()).map_err(io)
        }
        Command::VerifyLiftings { files } => verify_liftings(&files, out),
        Command::VerifyTable { csv } => verify_table(&csv, out),
        Command::Census { degree, triangulation, jobs, out: path, sample, seed, checkpoint } => {
            census_cmd(degree, &triangulation, jobs, &path, sample, seed, checkpoint, out)
        }
        Command::Search { degree, targets, budget, seed, triangulations, out: path } => {
            search_cmd(degree, &targets, budget, seed, triangulations.as_deref(), path, out)
        }
        Command::Families { name, degree } => families_cmd(&name, degree, out),
        Command::ExportPoly { file, t } => {
            let doc = load(&file)?;
            let (_, signs) = doc.resolve()?;
            let lifting = doc.triangulation.lifting()?;
            let text = match t {
                None => polynomial::symbolic(&signs, &lifting)?,
                Some(t) => polynomial::substituted(&signs, &lifting, &polynomial::parse_rational(&t)?)?,
            };
            writeln!(out, "{text}").map_err(io)
        }
        Command::Serve { port } => {
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(crate::service::serve(port))?;
            Ok(())
        }
    }
}

fn catalog_cmd(out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "{:<16}{:>7}{:>11}{:>11}  checksum", "key", "degree", "triangles", "symmetric")
        .map_err(io)?;
    for e in catalog::entries()? {
        let t = &e.triangulation;
        writeln!(
            out,
            "{:<16}{:>7}{:>11}{:>11}  {}",
            e.key,
            t.degree(),
            t.triangles().len(),
            t.is_symmetric(),
            t.checksum()
        )
        .map_err(io)?;
    }
    Ok(())
}

fn verify_liftings(files: &[PathBuf], out: &mut dyn Write) -> CliResult<()> {
    let mut items = Vec::new();
    if files.is_empty() {
        for e in catalog::entries()? {
            items.push((e.key.to_string(), e.triangulation, Some(e.lifting)));
        }
    } else {
        for path in files {
            let file: TriangulationFile =
                serde_json::from_str(&read(path)?).map_err(tcurve_core::Error::from)?;
            items.push((path.display().to_string(), file.triangulation()?, file.lifting));
        }
    }
    let mut failed = 0;
    for (label, t, lifting) in items {
        let Some(lifting) = lifting else {
            writeln!(out, "{label}: FAIL (no lifting)").map_err(io)?;
            failed += 1;
            continue;
        };
        let violations = verify_lifting(&t, &lifting)?;
        if violations.is_empty() {
            writeln!(out, "{label}: ok").map_err(io)?;
        } else {
            failed += 1;
            writeln!(out, "{label}: FAIL ({} violations)", violations.len()).map_err(io)?;
            for v in violations {
                writeln!(out, "  {v}").map_err(io)?;
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Check(format!("{failed} lifting(s) failed")));
    }
    Ok(())
}

fn verify_table(path: &Path, out: &mut dyn Write) -> CliResult<()> {
    let text = read(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some("scheme,triangulation,signs") {
        return Err(CliError::Usage("expected the header scheme,triangulation,signs".into()));
    }
    let (mut rows, mut failures) = (0, 0);
    for line in lines {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let [scheme, key, signs] = cols[..] else {
            return Err(CliError::Usage(format!("malformed row {line:?}")));
        };
        let t = catalog::resolve(key)?;
        let want = parse_scheme(scheme)?;
        let sigma = SignDistribution::parse(t.degree(), signs)?;
        let got = Patchwork::new(&t, sigma)?;
        rows += 1;
        if *got.scheme() != want {
            failures += 1;
            writeln!(out, "FAIL {scheme} on {key}: computed {}", got.scheme()).map_err(io)?;
        }
    }
    writeln!(out, "{} of {rows} rows reproduce their schemes", rows - failures).map_err(io)?;
    if failures > 0 {
        return Err(CliError::Check(format!("{failures} row(s) differ")));
    }
    Ok(())
}

/// JSON mirror of a census CSV.
#[derive(Serialize)]
struct CensusDocument {
    #[serde(flatten)]
    report: CensusReport,
    elapsed_seconds: f64,
}

#[allow(clippy::too_many_arguments)]
fn census_cmd(
    degree: u32,
    key: &str,
    jobs: usize,
    path: &Path,
    sample: Option<u64>,
    seed: u64,
    checkpoint: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let t = catalog::resolve(key)?;
    if t.degree() != degree {
        return Err(tcurve_core::Error::DegreeMismatch { left: degree, right: t.degree() }.into());
    }
    let start = Instant::now();
    let (h, mode, seed) = match sample {
        Some(n) => (census::sampled(&t, n, seed, jobs)?, "sampled", Some(seed)),
        None => {
            let options = CensusOptions { jobs, checkpoint, ..CensusOptions::default() };
            (census::exhaustive(&t, &options)?, "exhaustive", None)
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    write(path, &h.to_csv(degree)?)?;
    let doc =
        CensusDocument { report: CensusReport::new(&t, key, mode, seed, &h)?, elapsed_seconds: elapsed };
    let json = serde_json::to_string_pretty(&doc).map_err(tcurve_core::Error::from)?;
    let mirror = path.with_extension("json");
    write(&mirror, &(json + "\n"))?;
    writeln!(
        out,
        "{key}: {} classes, {} schemes, mean ovals {:.4}, mean loops {:.4}, {elapsed:.1} s",
        h.total(),
        doc.report.schemes.len(),
        h.mean_ovals(),
        h.mean_loops(degree)
    )
    .map_err(io)?;
    writeln!(out, "wrote {} and {}", path.display(), mirror.display()).map_err(io)
}

fn search_cmd(
    degree: u32,
    targets: &str,
    budget: u64,
    seed: u64,
    keys: Option<&str>,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let targets = if targets.trim() == "all" {
        Vec::new()
    } else {
        targets
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_scheme)
            .collect::<Result<_, _>>()?
    };
    let keys: Vec<String> = match keys {
        Some(k) => k.split(',').map(|s| s.trim().to_string()).collect(),
        None => {
            let shipped: Vec<String> =
                catalog::of_degree(degree)?.into_iter().map(|e| e.key.to_string()).collect();
            if shipped.is_empty() {
                vec![format!("honeycomb:{degree}")]
            } else {
                shipped
            }
        }
    };
    let mut triangulations = Vec::new();
    for k in keys {
        let t = catalog::resolve(&k)?;
        if t.degree() != degree {
            return Err(tcurve_core::Error::DegreeMismatch { left: degree, right: t.degree() }.into());
        }
        triangulations.push((k, t));
    }
    let config = SearchConfig { targets, budget, seed, ..SearchConfig::default() };
    let start = Instant::now();
    let result = search::search(&triangulations, &config)?;
    let mut table = String::from("scheme,triangulation,signs,index,strategy\n");
    for (scheme, r) in &result.found {
        let _ = writeln!(table, "{scheme},{},{},{},{}", r.triangulation, r.signs, r.index, r.strategy);
    }
    out.write_all(table.as_bytes()).map_err(io)?;
    let total = if config.targets.is_empty() {
        enumerate_schemes(degree).map(|s| s.len()).unwrap_or(result.found.len() + result.missing.len())
    } else {
        config.targets.len()
    };
    writeln!(
        out,
        "found {} of {total} targets with {} evaluations in {:.1} s",
        result.found.len(),
        result.evaluations,
        start.elapsed().as_secs_f64()
    )
    .map_err(io)?;
    for m in &result.missing {
        writeln!(out, "missing {m}").map_err(io)?;
    }
    if let Some(path) = path {
        write(&path, &table)?;
    }
    Ok(())
}

fn families_cmd(name: &str, degree: u32, out: &mut dyn Write) -> CliResult<()> {
    let families: Vec<Family> =
        if name == "all" { Family::ALL.to_vec() } else { vec![name.parse::<Family>()?] };
    let mut mismatches = 0;
    for family in families {
        let spec = match family.build(degree) {
            Ok(spec) => spec,
            Err(e @ tcurve_core::Error::FamilyDegree { .. }) if name == "all" => {
                writeln!(out, "{family}: skipped ({e})").map_err(io)?;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let computed = Patchwork::new(&spec.triangulation, spec.signs)?;
        let ok = *computed.scheme() == spec.expected;
        mismatches += !ok as usize;
        writeln!(
            out,
            "{family} d={degree}: expected {} computed {} {}",
            spec.expected,
            computed.scheme(),
            if ok { "ok" } else { "MISMATCH" }
        )
        .map_err(io)?;
    }
    if mismatches > 0 {
        return Err(CliError::Check(format!("{mismatches} family scheme(s) differ")));
    }
    Ok(())
}
