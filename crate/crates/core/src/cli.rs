//! Command dispatch for the `mfk` tool. Every command renders a deterministic
//! text report; exit codes are 0 on success, 1 for input errors, 2 for
//! mathematical failures and 3 when verification finds a non-zero record.

use std::fmt::Write as _;

use crate::action::DEFAULT_MAX_ORDER;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::kernel::{Coord, Indet, RatExpr};
use crate::parse::{NoScope, Parser};
use crate::rewrite::Rewriter;
use crate::spec::{parse_action_spec, ActionSpecFile};
use crate::syzygy::{edge_invariants, gen_all, verify_zero, Kind, SyzygyRec};

pub const EXIT_VERIFY: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Prolong { generator: String, order: u32 },
    Mc,
    Comm,
    Rewrite { target: String },
    Edge,
    Syz { verify: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub out: String,
    pub err: String,
    pub code: i32,
}

impl Report {
    fn ok(out: String) -> Self {
        Report { out, err: String::new(), code: 0 }
    }

    fn fail(e: &Error) -> Self {
        Report { out: String::new(), err: format!("error: {e}\n"), code: e.exit_code() }
    }
}

/// `MFK_MAX_ORDER`, falling back to the default when unset or malformed.
pub fn max_order_from_env() -> u32 {
    std::env::var("MFK_MAX_ORDER").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_ORDER)
}

pub fn run_text(cmd: &Command, text: &str, max_order: u32) -> Report {
    match parse_action_spec(text) {
        Ok(spec) => run_command(cmd, &spec, max_order),
        Err(e) => Report::fail(&e),
    }
}

pub fn run_command(cmd: &Command, spec: &ActionSpecFile, max_order: u32) -> Report {
    let res = match cmd {
        Command::Prolong { generator, order } => prolong(spec, generator, *order, max_order).map(Report::ok),
        _ => spec.frame_with_max_order(max_order).and_then(|frame| with_frame(cmd, spec, &frame)),
    };
    res.unwrap_or_else(|e| Report::fail(&e))
}

fn with_frame(cmd: &Command, spec: &ActionSpecFile, frame: &Frame) -> Result<Report> {
    let names = &spec.names;
    let mut out = String::new();
    match cmd {
        Command::Check => {
            let d = frame.diagnostics();
            writeln!(out, "generators {}", d.r).unwrap();
            writeln!(out, "order {}", d.s).unwrap();
            writeln!(out, "transversal rank {}/{}", d.transversal_rank, d.r).unwrap();
            for (&(k, rk), &(count, prank)) in d.orbit_ranks.iter().zip(&d.projection_ranks) {
                writeln!(out, "k={k} orbit rank {rk} equations {count} projected rank {prank}").unwrap();
            }
            writeln!(out, "minimal {}", d.minimal).unwrap();
        }
        Command::Mc => {
            let k = frame.k();
            for i in 0..k.rows() {
                let row: Vec<String> = k.row(i).iter().map(|e| names.expr(e)).collect();
                let lead = if i == 0 { "K = " } else { "    " };
                writeln!(out, "{lead}[ {} ]", row.join("  ")).unwrap();
            }
        }
        Command::Comm => {
            let m = frame.m();
            for i in 1..=m {
                for j in i + 1..=m {
                    let terms: Vec<String> = (1..=m)
                        .filter(|&k| !frame.lambda(i, j, k).is_zero())
                        .map(|k| format!("({})*D{k}", names.expr(frame.lambda(i, j, k))))
                        .collect();
                    let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                    writeln!(out, "[D{i}, D{j}] = {rhs}").unwrap();
                }
            }
        }
        Command::Rewrite { target } => {
            let mut p = Parser::new(target, 1, 1, names, &NoScope)?;
            let c = p.coord()?;
            p.expect_end()?;
            let rw = Rewriter::new(frame)?;
            let nf = match c {
                Coord::U(j, beta) => rw.rewrite_to_normal(j as usize, &beta)?,
                Coord::X(_) => RatExpr::var(Indet::Inv(c)),
            };
            writeln!(out, "I({}) = {}", names.coord(&c), names.expr(&nf)).unwrap();
        }
        Command::Edge => {
            let g = edge_invariants(frame)?;
            for (label, e) in &g.edge {
                writeln!(out, "{label} = {}", names.expr(e)).unwrap();
            }
            for (c, e) in frame.ctx().coords_up_to(0).iter().zip(&g.order_zero) {
                writeln!(out, "I({}) = {}", names.coord(c), names.expr(e)).unwrap();
            }
        }
        Command::Syz { verify } => {
            let rw = Rewriter::new(frame)?;
            let recs = gen_all(&rw)?;
            for rec in &recs {
                writeln!(out, "{}", rec.dump_line(names)).unwrap();
            }
            let count = |k| recs.iter().filter(|r| r.kind == k).count();
            write!(out, "# R={} S={} T={}", count(Kind::R), count(Kind::S), count(Kind::T)).unwrap();
            if *verify {
                let failed = verify_all(&rw, &recs)?;
                writeln!(out, " verified={}/{}", recs.len() - failed.len(), recs.len()).unwrap();
                if !failed.is_empty() {
                    let mut err = String::new();
                    for idx in failed {
                        writeln!(err, "not zero: {}", recs[idx].dump_line(names)).unwrap();
                    }
                    return Ok(Report { out, err, code: EXIT_VERIFY });
                }
            } else {
                out.push('\n');
            }
        }
        Command::Prolong { .. } => unreachable!("handled without a frame"),
    }
    Ok(Report::ok(out))
}

/// Indices of records whose `φ`-image does not vanish. Work is split across
/// threads; the result is sorted, so output order does not depend on
/// scheduling.
fn verify_all(rw: &Rewriter, recs: &[SyzygyRec]) -> Result<Vec<usize>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(recs.len().max(1));
    let chunk = recs.len().div_ceil(workers).max(1);
    let results: Vec<Result<Vec<usize>>> = std::thread::scope(|sc| {
        let handles: Vec<_> = recs
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                sc.spawn(move || {
                    let mut bad = Vec::new();
                    for (k, rec) in part.iter().enumerate() {
                        if !verify_zero(rw, rec)? {
                            bad.push(c * chunk + k);
                        }
                    }
                    Ok(bad)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification worker panicked")).collect()
    });
    let mut failed = Vec::new();
    for r in results {
        failed.extend(r?);
    }
    failed.sort_unstable();
    Ok(failed)
}

fn prolong(spec: &ActionSpecFile, generator: &str, order: u32, max_order: u32) -> Result<String> {
    let action = spec.action(max_order)?;
    let idx = match action.generators().iter().position(|g| g.name == generator) {
        Some(i) => i,
        None => match generator.parse::<usize>() {
            Ok(i) if (1..=action.len()).contains(&i) => i - 1,
            _ => return Err(Error::UnknownName { name: generator.to_string(), line: 0, col: 0 }),
        },
    };
    let p = action.prolong(idx, order)?;
    let mut out = String::new();
    for (c, e) in &p.coeffs {
        writeln!(out, "{}: {}", spec.names.coord(c), spec.names.expr(e)).unwrap();
    }
    Ok(out)
}
