mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use preproj_core::cartan::{Algebra, SymmetrizerSpec};
use preproj_core::catalog::{self, b2_algebra, b2_suite, type_a_algebra};
use preproj_core::linalg::FieldMode;
use preproj_core::pimod::{
    algebra_from_json, canonical_pieces, decompose, ext1_dim, ext1_dim_in, hom_dim, hom_dim_in, is_crystal,
    is_e_filtered, is_rigid, iso_test, module_from_json, module_to_json, ModuleRep,
};
use preproj_core::starop::{generic_cokernel, generic_extension, generic_kernel, star_table, Labeler, DEFAULT_TRIALS};
use preproj_core::symred::{verify_symmetrizer_compat, SymPair};
use preproj_core::{selftest, Error};
use serde_json::{json, Value};

use output::{Format, Report};

#[derive(Parser)]
#[command(name = "preproj", version, about = "Locally free modules over generalized preprojective algebras")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples per randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Ground field for `hom` and `ext`: `q`, `fp` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    field: FieldMode,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Algebra for catalog labels without a prefix and for `forms`:
    /// a built-in name (A2, A3, B2, A5) or an algebra file.
    #[arg(long, global = true, default_value = "B2")]
    algebra: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a Cartan datum and print its quiver and relations.
    Validate { algebra: String },
    /// Check the relations of a module and report its rank vector.
    Check { module: String },
    /// Rank vector of a locally free module.
    Rank { module: String },
    /// dim Hom(A, B).
    Hom { a: String, b: String },
    /// dim Ext¹(A, B) for locally free A, B.
    Ext { a: String, b: String },
    /// The forms α, β, (−,−) and the dimension formulas on rank vectors such as `1,2`.
    Forms { d: String, e: String },
    /// Canonical sub, Q, K and fac pieces at a vertex.
    Pieces { module: String, vertex: String },
    /// Search for a filtration by generalized simples.
    Efiltered { module: String },
    /// Recursive crystal test.
    Crystal { module: String },
    /// Self-extensions and orbit codimension.
    Rigid { module: String },
    /// Isomorphism test.
    Iso { a: String, b: String },
    /// Indecomposable summands.
    Decompose { module: String },
    /// Generic extension A * B (A on top, B as submodule).
    Star { a: String, b: String },
    /// M₁ with M ≅ M₁ * B: cokernel of a generic embedding B → M.
    DivideRight { m: String, b: String },
    /// M₂ with M ≅ A * M₂: kernel of a generic surjection M → A.
    DivideLeft { a: String, m: String },
    /// Product table of a built-in suite (`b2` or `a2`).
    Table {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Reduce a module over Π(C, nD, Ω) to Π(C, D, Ω).
    Reduce { module: String },
    /// Lift a module over Π(C, D, Ω) to Π(C, nD, Ω).
    Lift {
        module: String,
        #[arg(long)]
        n: usize,
    },
    /// Compare reduce(lift(A) * lift(B)) with A * B.
    CheckSymmetrizer {
        a: String,
        b: String,
        #[arg(long)]
        n: usize,
    },
    /// Built-in modules.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print the module file of a label such as `B2:M3`.
    Export { label: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    B2,
    A2,
}

/// How a command ended: a report and whether its assertion held.
struct Outcome {
    report: Report,
    ok: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, ok: true }
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Datum(_)
            | Error::Shape(_)
            | Error::Relations(_)
            | Error::AlgebraMismatch
            | Error::UnknownVertex(_)
            | Error::Format(_)
            | Error::Field(_)
            | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            Error::NotLocallyFree => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = outcome.report.render(cli.format);
            if let Err(e) = output::emit(&text, cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.ok { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn module(&self, arg: &str) -> Result<ModuleRep, Failure> {
        Ok(self.try_module(arg)??)
    }

    /// The outer error covers unreadable input; the inner one comes from the module itself.
    fn try_module(&self, arg: &str) -> Result<preproj_core::Result<ModuleRep>, Failure> {
        let path = Path::new(arg);
        if path.is_file() {
            let v = read_json(path)?;
            // reports of star, lift, reduce and the divisions carry their module
            let v = match v.get("module") {
                Some(inner) if v.get("algebra").is_none() => inner.clone(),
                _ => v,
            };
            return Ok(module_from_json(&v, path.parent()));
        }
        let default = self.default_algebra_name()?;
        Ok(catalog::resolve(arg, &default, self.cli.trials, self.cli.seed))
    }

    fn default_algebra_name(&self) -> Result<String, Failure> {
        let name = &self.cli.algebra;
        if catalog::algebra_by_name(name).is_some() {
            Ok(name.clone())
        } else {
            Err(Failure::Usage(format!("catalog labels need a built-in algebra, not {name:?}")))
        }
    }

    fn algebra(&self, arg: &str) -> Result<Arc<Algebra>, Failure> {
        if let Some(alg) = catalog::algebra_by_name(arg) {
            return Ok(alg);
        }
        if !Path::new(arg).is_file() {
            return Err(Failure::Usage(format!("{arg:?} is neither a built-in algebra nor a file")));
        }
        Ok(algebra_from_json(&Value::String(arg.to_string()), None)?)
    }

    fn header(&self, command: &str) -> Report {
        Report::new(command, self.cli.seed, self.cli.trials)
    }

    fn labeler(&self, alg: &Arc<Algebra>) -> Result<Labeler, Failure> {
        let (trials, seed) = (self.cli.trials, self.cli.seed);
        let mut known = Vec::new();
        if alg.datum() == b2_algebra().datum() {
            let suite = b2_suite(trials, seed)?;
            known = suite.named();
            known.extend(suite.named_projectives());
        } else if alg.datum() == type_a_algebra(2).datum() {
            for label in ["S1", "S2", "S1/S2", "S2/S1"] {
                known.push((label.to_string(), catalog::resolve(label, "A2", trials, seed)?));
            }
        }
        Ok(Labeler::new(known, trials, seed))
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_vector(s: &str, n: usize) -> Result<Vec<i64>, Failure> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot read rank vector {s:?}")))?;
    if v.len() != n {
        return Err(Failure::Usage(format!("rank vector {s:?} needs {n} entries")));
    }
    Ok(v)
}

/// Rank vector, dimensions and End/Ext¹ dimensions of a module without a name.
fn fingerprint(m: &ModuleRep) -> Result<String, Failure> {
    let rank = m.require_rank()?;
    Ok(format!("rank {rank:?} dims {:?} End {} Ext {}", m.dims(), hom_dim(m, m)?, ext1_dim(m, m)?))
}

fn summand_report(m: &ModuleRep, labeler: &mut Labeler) -> Result<Value, Failure> {
    let label = labeler.label(m)?;
    let name = if label.starts_with('X') { fingerprint(m)? } else { label };
    Ok(json!({ "label": name, "dims": m.dims(), "rank": m.rank_vector(), "module": module_to_json(m) }))
}

fn summands(m: &ModuleRep, ctx: &Ctx) -> Result<Vec<Value>, Failure> {
    let mut labeler = ctx.labeler(m.algebra())?;
    decompose(m, ctx.cli.seed)?.iter().map(|p| summand_report(p, &mut labeler)).collect()
}

/// The algebra with minimal symmetrizer, same labels and orientation, and the factor `n`.
fn base_of(alg: &Arc<Algebra>) -> Result<(Arc<Algebra>, usize), Failure> {
    let mut cfg = alg.datum().to_config();
    cfg.symmetrizer = SymmetrizerSpec::Named("minimal".into());
    let base = Algebra::new(cfg.to_datum().map_err(Error::from)?);
    let n = alg.datum().symmetrizer()[0] / base.datum().symmetrizer()[0];
    Ok((base, n as usize))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let ctx = Ctx { cli };
    let (seed, trials) = (cli.seed, cli.trials);
    let mut r = ctx.header(command_name(&cli.command));
    match &cli.command {
        Command::Validate { algebra } => {
            let alg = ctx.algebra(algebra)?;
            let d = alg.datum();
            r.set("valid", true);
            r.set("vertices", d.labels());
            r.set("cartan", d.cartan());
            r.set("symmetrizer", d.symmetrizer());
            r.set("orientation", d.orientation().iter().map(|&(i, j)| [d.label(i), d.label(j)]).collect::<Vec<_>>());
            r.set("arrows", (0..alg.arrows().len()).map(|k| alg.arrow_key(k)).collect::<Vec<_>>());
            r.set("relations", alg.relations().iter().map(|x| alg.format_relation(x)).collect::<Vec<_>>());
        }
        Command::Check { module } => match ctx.try_module(module)? {
            Ok(m) => {
                let (lf, rank) = m.is_locally_free();
                r.set("relations_hold", true);
                r.set("violations", Vec::<String>::new());
                r.set("dims", m.dims());
                r.set("locally_free", lf);
                r.set("rank", rank);
            }
            Err(Error::Relations(violations)) => {
                r.set("relations_hold", false);
                r.set("violations", violations);
                return Ok(Outcome { report: r, ok: false });
            }
            Err(e) => return Err(e.into()),
        },
        Command::Rank { module } => {
            let m = ctx.module(module)?;
            let (lf, rank) = m.is_locally_free();
            r.set("locally_free", lf);
            r.set("rank", rank);
            r.set("dims", m.dims());
        }
        Command::Hom { a, b } => {
            let (a, b) = (ctx.module(a)?, ctx.module(b)?);
            r.set("field", cli.field.to_string());
            r.set("hom", hom_dim_in(&a, &b, cli.field)?);
        }
        Command::Ext { a, b } => {
            let (a, b) = (ctx.module(a)?, ctx.module(b)?);
            r.set("field", cli.field.to_string());
            r.set("ext1", ext1_dim_in(&a, &b, cli.field)?);
        }
        Command::Forms { d, e } => {
            let alg = ctx.algebra(&cli.algebra)?;
            let datum = alg.datum();
            let (d, e) = (parse_vector(d, datum.n())?, parse_vector(e, datum.n())?);
            let forms = datum.euler_forms(&d, &e).map_err(Error::from)?;
            let dims = datum.dim_formulas(&d, &e).map_err(Error::from)?;
            r.set("d", &d);
            r.set("e", &e);
            r.set("alpha", forms.alpha);
            r.set("beta", forms.beta);
            r.set("symmetric", forms.symmetric);
            r.set("dim_rep", dims.dim_rc);
            r.set("dim_hom_t", dims.dim_hom_t);
            r.set("dim_gl", dims.dim_gl);
        }
        Command::Pieces { module, vertex } => {
            let m = ctx.module(module)?;
            let i = m.algebra().vertex(vertex)?;
            let p = canonical_pieces(&m, i)?;
            for (name, piece) in [("sub", &p.sub.module), ("q", &p.q.module), ("k", &p.k.module), ("fac", &p.fac.module)] {
                r.set(name, json!({ "dims": piece.dims(), "rank": piece.rank_vector(), "module": module_to_json(piece) }));
            }
        }
        Command::Efiltered { module } => {
            let m = ctx.module(module)?;
            let (ok, filt) = is_e_filtered(&m)?;
            let datum = m.algebra().datum();
            r.set("e_filtered", ok);
            r.set("filtration", filt.map(|f| f.vertices.iter().map(|&v| datum.label(v).to_string()).collect::<Vec<_>>()));
        }
        Command::Crystal { module } => {
            let m = ctx.module(module)?;
            r.set("crystal", is_crystal(&m)?);
        }
        Command::Rigid { module } => {
            let m = ctx.module(module)?;
            let x = is_rigid(&m)?;
            r.set("rigid", x.rigid);
            r.set("ext1", x.ext1);
            r.set("orbit_codim", x.orbit_codim);
        }
        Command::Iso { a, b } => {
            let (a, b) = (ctx.module(a)?, ctx.module(b)?);
            r.set("isomorphic", iso_test(&a, &b, trials, seed)?);
        }
        Command::Decompose { module } => {
            let m = ctx.module(module)?;
            r.set("summands", summands(&m, &ctx)?);
        }
        Command::Star { a, b } => {
            let (a, b) = (ctx.module(a)?, ctx.module(b)?);
            let s = generic_extension(&a, &b, trials, seed)?;
            r.set("certified", s.certified);
            r.set("rigid", s.rigid);
            r.set("ext1_self", s.ext1_self);
            r.set("flags", &s.flags);
            r.set("samples", s.samples);
            r.set("summands", summands(s.module(), &ctx)?);
            r.set("module", module_to_json(s.module()));
        }
        Command::DivideRight { m, b } => {
            let (m, b) = (ctx.module(m)?, ctx.module(b)?);
            let d = generic_cokernel(&m, &b, trials, seed)?;
            division_report(&mut r, &d.module, d.ext1_self, d.usable_samples, &ctx)?;
        }
        Command::DivideLeft { a, m } => {
            let (a, m) = (ctx.module(a)?, ctx.module(m)?);
            let d = generic_kernel(&a, &m, trials, seed)?;
            division_report(&mut r, &d.module, d.ext1_self, d.usable_samples, &ctx)?;
        }
        Command::Table { suite } => return table(r, *suite, &ctx),
        Command::Reduce { module } => {
            let m = ctx.module(module)?;
            let (base, n) = base_of(m.algebra())?;
            let red = SymPair::new(&base, n)?.reduce(&m)?;
            r.set("n", n);
            r.set("rank", red.rank_vector());
            r.set("module", module_to_json(&red));
        }
        Command::Lift { module, n } => {
            let m = ctx.module(module)?;
            let lifted = SymPair::new(m.algebra(), *n)?.lift(&m)?;
            r.set("n", n);
            r.set("rank", lifted.rank_vector());
            r.set("module", module_to_json(&lifted));
        }
        Command::CheckSymmetrizer { a, b, n } => {
            let (a, b) = (ctx.module(a)?, ctx.module(b)?);
            let report = verify_symmetrizer_compat(&SymPair::new(a.algebra(), *n)?, &a, &b, trials, seed)?;
            r.set("n", report.n);
            r.set("lifted_rank", &report.lifted_rank);
            r.set("reduced_rank", &report.reduced_rank);
            r.set("direct_rank", &report.direct_rank);
            r.set("isomorphic", report.isomorphic);
            return Ok(Outcome { report: r, ok: report.isomorphic });
        }
        Command::Catalog { action: CatalogAction::List } => {
            r.set("entries", catalog::list().into_iter().map(|(label, note)| json!({ "label": label, "note": note })).collect::<Vec<_>>());
        }
        Command::Catalog { action: CatalogAction::Export { label } } => {
            let m = ctx.module(label)?;
            return Ok(Outcome::ok(Report::raw(module_to_json(&m))));
        }
        Command::Selftest => {
            let report = selftest::run(seed, trials);
            let ok = report.passed;
            return Ok(Outcome { report: Report::selftest(report), ok });
        }
    }
    Ok(Outcome::ok(r))
}

fn division_report(r: &mut Report, m: &ModuleRep, ext1_self: usize, usable: usize, ctx: &Ctx) -> Result<(), Failure> {
    r.set("ext1_self", ext1_self);
    r.set("usable_samples", usable);
    r.set("summands", summands(m, ctx)?);
    r.set("module", module_to_json(m));
    Ok(())
}

fn table(mut r: Report, suite: Suite, ctx: &Ctx) -> Result<Outcome, Failure> {
    let (trials, seed) = (ctx.cli.trials, ctx.cli.seed);
    let (list, extra, expected, pictures) = match suite {
        Suite::B2 => {
            let s = b2_suite(trials, seed)?;
            let pictures: Vec<String> = s.entries.iter().map(|e| e.picture.clone()).collect();
            (s.named(), s.named_projectives(), Some(s.expected.clone()), pictures)
        }
        Suite::A2 => {
            let a2 = catalog::a2_suite();
            let list = vec![("S1".to_string(), a2.s1), ("S2".to_string(), a2.s2)];
            let mut extra = Vec::new();
            for label in ["S1/S2", "S2/S1"] {
                extra.push((label.to_string(), catalog::resolve(label, "A2", trials, seed)?));
            }
            (list, extra, None, vec!["1".into(), "2".into()])
        }
    };
    let t = star_table(&list, &extra, trials, seed);
    let fingerprints: Vec<(String, String)> = t
        .labeler
        .known
        .iter()
        .filter(|(n, _)| n.starts_with('X'))
        .map(|(n, m)| Ok((n.clone(), fingerprint(m)?)))
        .collect::<Result<_, Failure>>()?;
    let mut cells = Vec::new();
    let mut all_match = true;
    let heads: Vec<String> = t.labels.iter().zip(&pictures).map(|(l, p)| if l == p { l.clone() } else { format!("{l} ({p})") }).collect();
    let mut md = format!("# table {}\n\nseed {seed}, trials {trials}; row on top, column as submodule\n\n| * | {} |\n|---|{}\n", format!("{suite:?}").to_lowercase(), heads.join(" | "), "---|".repeat(heads.len()));
    for (ri, row) in t.cells.iter().enumerate() {
        let mut out_row = Vec::new();
        let _ = write!(md, "| {} |", heads[ri]);
        for (ci, cell) in row.iter().enumerate() {
            let cell = cell.as_ref().map_err(|e| Failure::Compute(format!("{} * {}: {e}", t.labels[ri], t.labels[ci])))?;
            let matches = expected.as_ref().map(|x| x[ri][ci] == cell.labels);
            all_match &= matches.unwrap_or(true) && cell.star.certified;
            let shown: Vec<String> = cell
                .labels
                .iter()
                .map(|l| fingerprints.iter().find(|(n, _)| n == l).map_or_else(|| l.clone(), |(_, f)| f.clone()))
                .collect();
            let mark = match (matches, cell.star.certified) {
                (Some(false), _) => " (expected ".to_string() + &expected.as_ref().map_or(String::new(), |x| x[ri][ci].join(" ⊕ ")) + ")",
                (_, false) => " (uncertified)".to_string(),
                _ => String::new(),
            };
            let _ = write!(md, " {}{mark} |", shown.join(" ⊕ "));
            out_row.push(json!({
                "row": t.labels[ri],
                "column": t.labels[ci],
                "summands": shown,
                "certified": cell.star.certified,
                "matches_expected": matches,
            }));
        }
        md.push('\n');
        cells.push(out_row);
    }
    r.set("suite", format!("{suite:?}").to_lowercase());
    r.set("labels", &t.labels);
    r.set("pictures", &pictures);
    r.set("cells", cells);
    if expected.is_some() {
        r.set("matches_expected", all_match);
        let _ = writeln!(md, "\n{}", if all_match { "matches the expected table" } else { "differs from the expected table" });
    }
    r.set_markdown(md);
    Ok(Outcome { report: r, ok: all_match })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Check { .. } => "check",
        Command::Rank { .. } => "rank",
        Command::Hom { .. } => "hom",
        Command::Ext { .. } => "ext",
        Command::Forms { .. } => "forms",
        Command::Pieces { .. } => "pieces",
        Command::Efiltered { .. } => "efiltered",
        Command::Crystal { .. } => "crystal",
        Command::Rigid { .. } => "rigid",
        Command::Iso { .. } => "iso",
        Command::Decompose { .. } => "decompose",
        Command::Star { .. } => "star",
        Command::DivideRight { .. } => "divide-right",
        Command::DivideLeft { .. } => "divide-left",
        Command::Table { .. } => "table",
        Command::Reduce { .. } => "reduce",
        Command::Lift { .. } => "lift",
        Command::CheckSymmetrizer { .. } => "check-symmetrizer",
        Command::Catalog { .. } => "catalog",
        Command::Selftest => "selftest",
    }
}
