//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use cforge_core::coverage::{Analyzer, CoverageOptions, CoverageReport, Fraction, Requirement};
use cforge_core::io::{export, write_file_set, ExportFormat};
use cforge_core::portfolio::cohort_stats;
use cforge_core::whatif::whatif_with;
use cforge_core::{Diagnostic, Error};
use clap::{ArgGroup, Parser, Subcommand};
use serde_json::Value;

use crate::query::{self, QueryError, Snapshot};
use crate::server::{serve, AppState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cforge",
    version,
    about = "Competency model toolkit: validate, trace, analyse coverage, explore curriculum edits"
)]
pub struct Cli {
    /// Print interchange JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,

    /// Credit skills and dispositions only from courses that teach one of
    /// the competency's required topics.
    #[arg(long, global = true)]
    pub strict_fpk: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a model directory (or model.json).
    Validate { path: PathBuf },
    /// Topic coverage of one competency, of all competencies, or per course.
    Coverage {
        path: PathBuf,
        #[arg(long)]
        competency: Option<String>,
        #[arg(long, conflicts_with = "competency")]
        matrix: bool,
    },
    /// Competencies depending on a topic, or the teaching behind a competency.
    #[command(group(ArgGroup::new("target").required(true)))]
    Trace {
        path: PathBuf,
        #[arg(long, group = "target")]
        topic: Option<String>,
        #[arg(long, group = "target")]
        competency: Option<String>,
    },
    /// Every unsatisfied requirement, plus orphan and untaught topics.
    Gaps { path: PathBuf },
    /// Per-block coverage for a pathway.
    Pathway {
        path: PathBuf,
        #[arg(long)]
        id: String,
    },
    /// Gap report before and after applying a delta file (DSL or JSON).
    Whatif {
        path: PathBuf,
        #[arg(long)]
        delta: PathBuf,
    },
    /// Cohort statistics over all portfolios.
    Stats { path: PathBuf },
    /// One student's attainment of a competency.
    Attainment {
        path: PathBuf,
        #[arg(long)]
        student: String,
        #[arg(long)]
        competency: String,
    },
    /// Write the model as DSL, JSON, wiki pages or a DOT graph.
    Export {
        path: PathBuf,
        #[arg(long)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the HTTP query API.
    Serve {
        path: PathBuf,
        #[arg(long, env = "CFORGE_PORT", default_value_t = 7878)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn print_json(&mut self, v: &Value) {
        let text = serde_json::to_string_pretty(v).expect("values serialize");
        let _ = writeln!(self.out, "{text}");
    }

    fn print(&mut self, text: &str) {
        let _ = write!(self.out, "{text}");
    }

    fn warnings(&mut self, diags: &[Diagnostic]) {
        for d in diags {
            let _ = writeln!(self.err, "{d}");
        }
    }

    fn fail(&mut self, e: QueryError) -> i32 {
        if self.json {
            self.print_json(&e.body());
        }
        for d in &e.diagnostics {
            let _ = writeln!(self.err, "{d}");
        }
        EXIT_DIAGNOSTICS
    }
}

/// Runs one command line. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let mut io = Io {
        out,
        err,
        json: cli.json,
    };
    let options = CoverageOptions {
        strict_fpk: cli.strict_fpk,
    };
    match dispatch(cli.command, options, &mut io) {
        Ok(code) => code,
        Err(e) => io.fail(e),
    }
}

fn load(path: &Path, io: &mut Io) -> Result<Snapshot, QueryError> {
    let snap = Snapshot::load(path)?;
    io.warnings(&snap.warnings);
    Ok(snap)
}

fn frac(f: Fraction) -> String {
    format!("{f} ({:.2})", f.to_f64())
}

fn dispatch(command: Command, options: CoverageOptions, io: &mut Io) -> Result<i32, QueryError> {
    match command {
        Command::Validate { path } => {
            let snap = load(&path, io)?;
            if io.json {
                io.print_json(&query::validation(&snap));
            } else {
                io.print(&format!(
                    "{} competencies, {} blocks, {} topics OK\n",
                    snap.model.competencies().count(),
                    snap.model.blocks.len(),
                    snap.model.topics().count()
                ));
            }
        }
        Command::Coverage {
            path,
            competency,
            matrix,
        } => {
            let snap = load(&path, io)?;
            let an = Analyzer::new(&snap.graph).options(options);
            match (competency, matrix) {
                (Some(id), _) => {
                    if io.json {
                        io.print_json(&query::coverage(&snap, &id, options)?);
                    } else {
                        io.print(&render_report(&an.competency_coverage(&id)?));
                    }
                }
                (None, true) => {
                    if io.json {
                        io.print_json(&query::matrix(&snap, options));
                    } else {
                        io.print(&render_matrix(&an));
                    }
                }
                (None, false) => {
                    if io.json {
                        io.print_json(&query::coverage_all(&snap, options));
                    } else {
                        io.print(&render_summary(&an.all_reports()));
                    }
                }
            }
        }
        Command::Trace {
            path,
            topic,
            competency,
        } => {
            let snap = load(&path, io)?;
            if let Some(t) = topic {
                if io.json {
                    io.print_json(&query::trace_topic(&snap, &t)?);
                } else {
                    let hits = snap.graph.trace_forward(&t)?;
                    let mut s = format!("{t} is required by {} competencies\n", hits.len());
                    for h in hits {
                        writeln!(s, "  {:<6} @ {}", h.competency, h.level).unwrap();
                    }
                    io.print(&s);
                }
            } else if let Some(c) = competency {
                if io.json {
                    io.print_json(&query::trace_competency(&snap, &c)?);
                } else {
                    let bt = snap.graph.trace_backward(&c)?;
                    let mut s = format!("competency {c}\n  topics:\n");
                    for t in &bt.topics {
                        writeln!(s, "    {t}").unwrap();
                    }
                    writeln!(s, "  outcomes ({}):", bt.outcomes.len()).unwrap();
                    for o in &bt.outcomes {
                        writeln!(s, "    {o}").unwrap();
                    }
                    let courses: Vec<&str> = bt.courses.iter().map(String::as_str).collect();
                    writeln!(s, "  courses: {}", courses.join(", ")).unwrap();
                    io.print(&s);
                }
            }
        }
        Command::Gaps { path } => {
            let snap = load(&path, io)?;
            if io.json {
                io.print_json(&query::gaps(&snap, options));
            } else {
                io.print(&render_gaps(&Analyzer::new(&snap.graph).options(options)));
            }
        }
        Command::Pathway { path, id } => {
            let snap = load(&path, io)?;
            if io.json {
                io.print_json(&query::pathway(&snap, &id, options)?);
            } else {
                let p = Analyzer::new(&snap.graph)
                    .options(options)
                    .pathway_profile(&id)?;
                let mut s = format!("pathway {}\n", p.pathway);
                s.push_str("  BLOCK  EMPHASIS   MEAN COVERAGE    TITLE\n");
                for b in &p.blocks {
                    let mark = if b.emphasized { "yes" } else { "" };
                    writeln!(
                        s,
                        "  {:<6} {:<10} {:<16} {}",
                        b.block,
                        mark,
                        frac(b.mean_fraction),
                        b.title
                    )
                    .unwrap();
                }
                io.print(&s);
                io.warnings(&p.warnings);
            }
        }
        Command::Whatif { path, delta } => {
            let snap = load(&path, io)?;
            let text = std::fs::read_to_string(&delta).map_err(|e| Error::io(&delta, e))?;
            let d = query::parse_delta(&text, &delta.display().to_string())?;
            if io.json {
                io.print_json(&query::whatif(&snap, &d, options)?);
            } else {
                let r = whatif_with(&snap.graph, &d, options)?;
                let mut s = String::new();
                if r.changed.is_empty() {
                    s.push_str("no coverage changes\n");
                }
                for c in &r.changed {
                    writeln!(
                        s,
                        "  {:<6} {} -> {}",
                        c.competency,
                        frac(c.before),
                        frac(c.after)
                    )
                    .unwrap();
                }
                writeln!(
                    s,
                    "gaps: {} before, {} after",
                    r.before.gap_count(),
                    r.after.gap_count()
                )
                .unwrap();
                io.print(&s);
            }
        }
        Command::Stats { path } => {
            let snap = load(&path, io)?;
            if io.json {
                io.print_json(&query::stats(&snap));
            } else {
                let st = cohort_stats(&snap.model.portfolios);
                let mean = st
                    .mean_specs_per_page()
                    .map(frac)
                    .unwrap_or_else(|_| "undefined (no pages)".into());
                io.print(&format!(
                    "students        {}\npages           {}\nlinked specs    {}\nspecs per page  {}\nrevisions       {}\n",
                    st.students, st.pages, st.specs_total, mean, st.revisions_total
                ));
            }
        }
        Command::Attainment {
            path,
            student,
            competency,
        } => {
            let snap = load(&path, io)?;
            let v = query::attainment_of(&snap, &student, &competency)?;
            if io.json {
                io.print_json(&v);
            } else {
                let portfolio = snap.model.portfolio(&student).expect("resolved above");
                let a = cforge_core::portfolio::attainment(&snap.graph, portfolio, &competency)?;
                let mut s = format!(
                    "{student} attains {} of competency {competency}\n",
                    frac(a.fraction)
                );
                for e in &a.evidence {
                    writeln!(
                        s,
                        "  {:<10} {:<32} self-assessed {} via {}",
                        e.record,
                        e.requirement.to_string(),
                        e.level,
                        e.via
                    )
                    .unwrap();
                }
                io.print(&s);
            }
        }
        Command::Export { path, format, out } => {
            let snap = load(&path, io)?;
            let files = export(&snap.model, format);
            let written = write_file_set(&files, &out)?;
            if io.json {
                let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
                io.print_json(&serde_json::json!({ "format": format.as_str(), "files": names }));
            } else {
                io.print(&format!(
                    "wrote {} file(s) to {}\n",
                    written.len(),
                    out.display()
                ));
            }
        }
        Command::Serve { path, port, bind } => {
            let snap = load(&path, io)?;
            let state = AppState::new(snap, options);
            let runtime =
                tokio::runtime::Runtime::new().map_err(|e| Error::io("tokio runtime", e))?;
            runtime.block_on(serve(state, SocketAddr::new(bind, port)))?;
        }
    }
    Ok(EXIT_OK)
}

fn render_report(r: &CoverageReport) -> String {
    let mut s = format!(
        "competency {}: topic coverage {}\n",
        r.competency,
        frac(r.topic_fraction)
    );
    for st in &r.statuses {
        let mark = if st.satisfied { "x" } else { " " };
        let offer = match (&st.requirement, &st.best_offer) {
            (Requirement::Topic { .. }, Some(o)) => {
                format!("best {}/{} @ {}", o.course, o.outcome, o.level)
            }
            (Requirement::Topic { .. }, None) => "untaught".to_string(),
            _ => String::new(),
        };
        writeln!(s, "  [{mark}] {:<40} {offer}", st.requirement.to_string()).unwrap();
    }
    let ok = |b: bool| if b { "ok" } else { "missing" };
    writeln!(
        s,
        "skills: {}, dispositions: {}",
        ok(r.skills_ok),
        ok(r.dispositions_ok)
    )
    .unwrap();
    s
}

fn render_summary(reports: &[CoverageReport]) -> String {
    let mut s = format!(
        "{:<6} {:<16} {:<8} {}\n",
        "ID", "TOPICS", "SKILLS", "DISPOSITIONS"
    );
    for r in reports {
        let ok = |b: bool| if b { "ok" } else { "missing" };
        writeln!(
            s,
            "{:<6} {:<16} {:<8} {}",
            r.competency,
            frac(r.topic_fraction),
            ok(r.skills_ok),
            ok(r.dispositions_ok)
        )
        .unwrap();
    }
    s
}

fn render_matrix(an: &Analyzer) -> String {
    let m = an.coverage_matrix();
    let width = m.courses.iter().map(String::len).max().unwrap_or(0).max(2);
    let mut s = format!("{:<6}", "");
    for k in &m.courses {
        write!(s, " {k:>width$}").unwrap();
    }
    s.push('\n');
    for (c, row) in m.competencies.iter().zip(&m.cells) {
        write!(s, "{c:<6}").unwrap();
        for n in row {
            write!(s, " {n:>width$}").unwrap();
        }
        s.push('\n');
    }
    s
}

fn render_gaps(an: &Analyzer) -> String {
    let g = an.gap_report();
    let mut s = String::new();
    for c in &g.competencies {
        writeln!(s, "competency {}", c.competency).unwrap();
        for gap in &c.gaps {
            let offer = gap
                .best_offer
                .as_ref()
                .map(|o| format!(" (best offer {}/{} @ {})", o.course, o.outcome, o.level))
                .unwrap_or_default();
            writeln!(
                s,
                "  {:<20} {}{offer}",
                gap.reason.as_str(),
                gap.requirement
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        "{} gap(s) in {} competencies",
        g.gap_count(),
        g.competencies.len()
    )
    .unwrap();
    writeln!(
        s,
        "untaught topics ({}): {}",
        g.untaught_topics.len(),
        g.untaught_topics.join(", ")
    )
    .unwrap();
    writeln!(
        s,
        "orphan topics ({}): {}",
        g.orphan_topics.len(),
        g.orphan_topics.join(", ")
    )
    .unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn fractions_show_exact_and_rounded() {
        assert_eq!(frac(Fraction::new(7805, 931)), "1115/133 (8.38)");
        assert_eq!(frac(Fraction::new(0, 3)), "0/1 (0.00)");
    }

    #[test]
    fn global_flags_follow_the_subcommand() {
        let cli = Cli::try_parse_from(["cforge", "gaps", "dir", "--json", "--strict-fpk"]).unwrap();
        assert!(cli.json && cli.strict_fpk);
        assert!(matches!(cli.command, Command::Gaps { .. }));
    }

    #[test]
    fn export_format_is_case_insensitive() {
        let cli = Cli::try_parse_from(["cforge", "export", "d", "--format", "WIKI", "--out", "o"])
            .unwrap();
        match cli.command {
            Command::Export { format, .. } => assert_eq!(format, ExportFormat::Wiki),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn serve_port_and_default_bind() {
        let cli = Cli::try_parse_from(["cforge", "serve", "d", "--port", "9001"]).unwrap();
        match cli.command {
            Command::Serve { port, bind, .. } => {
                assert_eq!(port, 9001);
                assert_eq!(bind.to_string(), "127.0.0.1");
            }
            other => panic!("{other:?}"),
        }
    }
}
