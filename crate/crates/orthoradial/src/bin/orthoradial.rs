//! Command-line front end: validate, draw, certify, reduce, gen, bench.
//!
//! Exit codes are a documented contract: 0 success, 2 invalid instance,
//! 3 undrawable instance, 64 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use orthoradial::draw::{
    draw_run, rep_drawing, unthicken_drawing, verify_drawing, PolarDrawing, RadiusSchedule,
};
use orthoradial::engine;
use orthoradial::extract::{extract_certificate, unthicken_certificate};
use orthoradial::generate::{generate_instance, perturb, GeneratorParams};
use orthoradial::graph::DartId;
use orthoradial::io::{
    emit_instance, emit_outcome, outcome, parse_instance, render_svg, InstanceFile, OutcomeFile,
};
use orthoradial::preprocess::{needs_thickening, prepare, thicken};
use orthoradial::rep::{MonotoneCertificate, OrthoRadialRep};
use orthoradial::search::{binary_search_reference, SearchOutcome};

const EXIT_INVALID: u8 = 2;
const EXIT_UNDRAWABLE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "orthoradial",
    version,
    about = "Bend-free ortho-radial drawings on cylindrical grids"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the structural conditions (360-degree vertices, facial
    /// rotations) and report violations.
    Validate { file: PathBuf },
    /// Draw the instance, or emit a monotone-cycle certificate.
    Draw {
        file: PathBuf,
        /// Fix the reference dart as `U,V` instead of searching for one.
        #[arg(long, value_name = "U,V")]
        reference: Option<String>,
        /// Place segments on the outermost admissible layer.
        #[arg(long)]
        min_layers: bool,
        /// Also render the drawing to this SVG file.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Write the outcome file here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Like draw, but print only the certificate.
    Certify {
        file: PathBuf,
        #[arg(long, value_name = "U,V")]
        reference: Option<String>,
    },
    /// Emit the thickened (simple, biconnected) equivalent instance.
    Reduce {
        file: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Generate a drawable instance (optionally perturbed).
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        layers: usize,
        #[arg(long, default_value_t = 6)]
        columns: usize,
        /// Apply this many quarter-turn edge perturbations.
        #[arg(long, default_value_t = 0)]
        perturb: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the fixed-reference pipeline on generated instances and print a
    /// CSV of sizes, wall times and operation counters.
    Bench {
        /// Target vertex counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load(file: &PathBuf) -> Result<InstanceFile, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", file.display()))
}

/// Resolves `U,V` to the dart `u -> v`.
fn resolve_reference(rep: &OrthoRadialRep, spec: &str) -> Result<DartId, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    let [u, v] = parts[..] else {
        return Err(format!("reference `{spec}` is not of the form U,V"));
    };
    let (u, v) = (
        u.trim().parse::<usize>().map_err(|e| e.to_string())?,
        v.trim().parse::<usize>().map_err(|e| e.to_string())?,
    );
    (0..rep.graph.dart_count())
        .find(|&d| rep.graph.tail(d) == u && rep.graph.head(d) == v)
        .ok_or(format!("no edge joins {u} and {v}"))
}

/// Some dart on the reversed outer facial cycle, used as probe or default
/// reference.
fn default_outer_dart(rep: &OrthoRadialRep) -> DartId {
    let d = rep.faces.cycles[rep.outer][0];
    rep.graph.twin(d)
}

fn emit_to(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum Verdict {
    Drawn(DartId, PolarDrawing),
    Undrawable(MonotoneCertificate),
}

/// The fixed-reference pipeline, thickening first when the input is not
/// simple and biconnected.
fn run_fixed(
    rep: &OrthoRadialRep,
    reference: DartId,
    schedule: RadiusSchedule,
) -> Result<Verdict, String> {
    let thickened = if needs_thickening(rep) {
        Some(thicken(rep, reference).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let (work_rep, work_ref) = match &thickened {
        Some(t) => (&t.rep, t.reference),
        None => (rep, reference),
    };
    let p = prepare(work_rep, work_ref).map_err(|e| e.to_string())?;
    let res = engine::run(p.wg.clone(), p.reference, p.central_dart);
    match res.outcome {
        engine::Outcome::Covered => {
            let wd = draw_run(&res, schedule, false).map_err(|e| format!("{e:?}"))?;
            let pd = rep_drawing(&p, work_rep, &wd);
            let pd = match &thickened {
                Some(t) => unthicken_drawing(&t.map, rep, reference, &pd)
                    .map_err(|e| e.to_string())?,
                None => pd,
            };
            let violations = verify_drawing(rep, &pd);
            if !violations.is_empty() {
                return Err(format!("drawing failed verification: {violations:?}"));
            }
            Ok(Verdict::Drawn(reference, pd))
        }
        engine::Outcome::Stuck { .. } => {
            let cert = extract_certificate(&res, work_rep, work_ref, &p.chains)
                .map_err(|e| e.to_string())?;
            let cert = match &thickened {
                Some(t) => unthicken_certificate(rep, reference, &t.map, &cert)
                    .map_err(|e| e.to_string())?,
                None => cert,
            };
            Ok(Verdict::Undrawable(cert))
        }
    }
}

/// Draw with a searched reference; falls back to probing every outer dart
/// when the instance needs thickening.
fn run_search(rep: &OrthoRadialRep, probe: DartId, schedule: RadiusSchedule) -> Result<Verdict, String> {
    if needs_thickening(rep) {
        let outer: Vec<DartId> = rep.faces.cycles[rep.outer]
            .iter()
            .map(|&d| rep.graph.twin(d))
            .collect();
        let mut last = None;
        for r in outer {
            match run_fixed(rep, r, schedule)? {
                Verdict::Drawn(r, pd) => return Ok(Verdict::Drawn(r, pd)),
                Verdict::Undrawable(c) => last = Some(c),
            }
        }
        return last
            .map(Verdict::Undrawable)
            .ok_or_else(|| "outer face has no candidate reference".into());
    }
    match binary_search_reference(rep, probe).map_err(|e| e.to_string())? {
        SearchOutcome::Drawn(d) => {
            if schedule == RadiusSchedule::MinimizedLayers {
                // Redraw at the found reference on minimized layers.
                return run_fixed(rep, d.reference, schedule);
            }
            Ok(Verdict::Drawn(d.reference, d.drawing))
        }
        SearchOutcome::Undrawable(u) => u
            .increasing
            .or(u.decreasing)
            .map(Verdict::Undrawable)
            .ok_or_else(|| "undrawable but no certificate gathered".into()),
    }
}

fn cmd_validate(file: PathBuf) -> ExitCode {
    // Structural parse failures are also "invalid instance".
    let inst = match load(&file) {
        Ok(i) => i,
        Err(e) => return fail(EXIT_INVALID, &e),
    };
    let bad_vertices = inst.rep.check_vertex_angles();
    let bad_faces = inst.rep.check_face_rotations();
    let ok = bad_vertices.is_empty() && bad_faces.is_empty();
    let report = OutcomeFile::Invalid {
        bad_vertices,
        bad_faces,
    };
    if ok {
        println!("valid");
        ExitCode::SUCCESS
    } else {
        print!("{}", emit_outcome(&report));
        ExitCode::from(EXIT_INVALID)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_draw(
    file: PathBuf,
    reference: Option<String>,
    min_layers: bool,
    svg: Option<PathBuf>,
    out: Option<PathBuf>,
    certificate_only: bool,
) -> ExitCode {
    let inst = match load(&file) {
        Ok(i) => i,
        Err(e) => return fail(EXIT_INVALID, &e),
    };
    let rep = &inst.rep;
    if !rep.check_vertex_angles().is_empty() || !rep.check_face_rotations().is_empty() {
        return fail(EXIT_INVALID, "instance violates the structural conditions");
    }
    let schedule = if min_layers {
        RadiusSchedule::MinimizedLayers
    } else {
        RadiusSchedule::PerAppend
    };
    let verdict = match &reference {
        Some(spec) => match resolve_reference(rep, spec) {
            Ok(r) => run_fixed(rep, r, schedule),
            Err(e) => return fail(EXIT_USAGE, &e),
        },
        None => {
            let probe = inst.reference.unwrap_or_else(|| default_outer_dart(rep));
            match run_fixed(rep, probe, schedule) {
                // The file's own reference (or the default) counts as one
                // more candidate before the search widens.
                Ok(Verdict::Drawn(r, pd)) => Ok(Verdict::Drawn(r, pd)),
                _ => run_search(rep, probe, schedule),
            }
        }
    };
    match verdict {
        Err(e) => fail(EXIT_INVALID, &e),
        Ok(Verdict::Drawn(r, pd)) => {
            if certificate_only {
                println!("drawable; no certificate exists for reference ({}, {})",
                    rep.graph.tail(r), rep.graph.head(r));
                return ExitCode::SUCCESS;
            }
            if let Some(path) = &svg {
                if let Err(e) = std::fs::write(path, render_svg(&pd)) {
                    return fail(EXIT_INVALID, &format!("{}: {e}", path.display()));
                }
            }
            let o = outcome::drawn_outcome(rep, r, &pd);
            match emit_to(&out, &emit_outcome(&o)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(EXIT_INVALID, &e),
            }
        }
        Ok(Verdict::Undrawable(cert)) => {
            let text = if certificate_only {
                let mut s = serde_json::to_string_pretty(&cert).expect("certificate serializes");
                s.push('\n');
                s
            } else {
                emit_outcome(&outcome::undrawable_outcome(rep, &cert))
            };
            match emit_to(&out, &text) {
                Ok(()) => ExitCode::from(EXIT_UNDRAWABLE),
                Err(e) => fail(EXIT_INVALID, &e),
            }
        }
    }
}

fn cmd_reduce(file: PathBuf, out: Option<PathBuf>) -> ExitCode {
    let inst = match load(&file) {
        Ok(i) => i,
        Err(e) => return fail(EXIT_INVALID, &e),
    };
    let reference = inst
        .reference
        .unwrap_or_else(|| default_outer_dart(&inst.rep));
    let t = match thicken(&inst.rep, reference) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INVALID, &e.to_string()),
    };
    match emit_to(&out, &emit_instance(&t.rep, Some(t.reference))) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_INVALID, &e),
    }
}

fn cmd_gen(seed: u64, layers: usize, columns: usize, perturbations: usize, out: Option<PathBuf>) -> ExitCode {
    let params = GeneratorParams {
        seed,
        layers,
        columns,
        perturbations,
    };
    let g = match generate_instance(params) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };
    let rep = if perturbations > 0 {
        perturb(&g.rep, seed, perturbations)
    } else {
        g.rep
    };
    match emit_to(&out, &emit_instance(&rep, Some(g.reference))) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_INVALID, &e),
    }
}

/// One bench row: generate, prepare, run, count.
///
/// A three-column cylinder keeps every ring at exactly three vertices, so
/// the instance size tracks the requested target instead of depending on
/// how fast random nested rings shrink.
fn bench_row(seed: u64, target: usize) -> Result<String, String> {
    let columns = 3;
    let layers = (target / columns).max(1);
    let g = generate_instance(GeneratorParams {
        seed,
        layers,
        columns,
        perturbations: 0,
    })
    .map_err(|e| e.to_string())?;
    let n = g.rep.graph.vertex_count();
    let t0 = Instant::now();
    let p = prepare(&g.rep, g.reference).map_err(|e| e.to_string())?;
    let res = engine::run(p.wg, p.reference, p.central_dart);
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    if !matches!(res.outcome, engine::Outcome::Covered) {
        return Err(format!("generated instance of size {n} was not covered"));
    }
    let c = &res.counters;
    Ok(format!(
        "{target},{n},{wall_ms:.3},{},{},{},{},{},{}",
        c.appends, c.splices, c.queries, c.bucket_moves, c.face_splits, c.virtual_edges
    ))
}

fn cmd_bench(sizes: Vec<usize>, seed: u64) -> ExitCode {
    println!("target,n,wall_ms,appends,splices,queries,bucket_moves,face_splits,virtual_edges");
    #[cfg(feature = "parallel")]
    let rows: Vec<Result<String, String>> = {
        use rayon::prelude::*;
        sizes.par_iter().map(|&s| bench_row(seed, s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<String, String>> =
        sizes.iter().map(|&s| bench_row(seed, s)).collect();
    for row in rows {
        match row {
            Ok(r) => println!("{r}"),
            Err(e) => return fail(EXIT_INVALID, &e),
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match cli.cmd {
        Cmd::Validate { file } => cmd_validate(file),
        Cmd::Draw {
            file,
            reference,
            min_layers,
            svg,
            out,
        } => cmd_draw(file, reference, min_layers, svg, out, false),
        Cmd::Certify { file, reference } => cmd_draw(file, reference, false, None, None, true),
        Cmd::Reduce { file, out } => cmd_reduce(file, out),
        Cmd::Gen {
            seed,
            layers,
            columns,
            perturb,
            out,
        } => cmd_gen(seed, layers, columns, perturb, out),
        Cmd::Bench { sizes, seed } => cmd_bench(sizes, seed),
    }
}
