mod run;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use doctrina::category::{validate_base, Cartesian, Category, FinCat};
use doctrina::charax::{epsilon_operators, find_cover, has_rc, is_cover, is_splitting, verify_main_theorem};
use doctrina::completions::{comprehension_completion, existential_completion, extensional_reflection, pred_category};
use doctrina::doctrine::{tabulate_over, validate_doctrine, validate_subdoctrine, Doctrine, DoctrineExt, Level, Subdoctrine, TabDoctrine};
use doctrina::io::{self, Base, LoadedDoctrine};
use doctrina::regexcat::{
    check_equivalence, check_exactness, check_regular, ex_comparison, ex_completion, ex_reg_crosscheck, reg_completion, Embedded, DEFAULT_BUDGET,
};
use doctrina::reglog::{entails_empty, materialize_with_horn, parse_sequent, parse_theory, show_context, Show};
use doctrina::report::Report;
use run::RunReport;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "doctrina", version, about = "Finite doctrines, their completions and the characterization checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON run report here (`-` for standard output).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Word-length bound for generated bases.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Candidate budget for completion constructions.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Write a graph of the constructed category here.
    #[arg(long, global = true, value_name = "PATH")]
    emit_dot: Option<PathBuf>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a base category or a doctrine at a level.
    Validate {
        file: PathBuf,
        #[arg(long, default_value = "existential")]
        level: String,
        /// Also validate the selected subdoctrine.
        #[arg(long)]
        sub: Option<PathBuf>,
    },
    /// Build a completion and write it as a doctrine file.
    Complete {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Completion::Existential)]
        kind: Completion,
        /// Complete the selected subdoctrine instead of the whole doctrine.
        #[arg(long)]
        sub: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The category of predicates.
    Pred { file: PathBuf },
    /// The regular completion and its regularity checks.
    Reg { file: PathBuf },
    /// The exact completion, its exactness and the comparison with the
    /// exact completion of the regular completion.
    Ex { file: PathBuf },
    /// Characterization checks.
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        file: PathBuf,
        /// A single element `OBJECT:ELEMENT` (name or index).
        #[arg(long)]
        element: Option<String>,
        /// Candidate cover for `check cover`.
        #[arg(long)]
        sub: Option<PathBuf>,
    },
    /// Theorem verifiers.
    Thm {
        #[command(subcommand)]
        which: Thm,
    },
    /// The regular-logic engine.
    Logic {
        #[command(subcommand)]
        which: Logic,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Completion {
    Existential,
    Comprehension,
    Extensional,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Rc,
    Cover,
    Epsilon,
    Splitting,
}

#[derive(Subcommand)]
enum Thm {
    /// Cover condition against the regular and exact completion equivalences.
    Main {
        file: PathBuf,
        #[arg(long)]
        sub: PathBuf,
    },
}

#[derive(Subcommand)]
enum Logic {
    /// Decide a sequent `ctx | phi |- psi` over the theory's signature.
    Entail {
        file: PathBuf,
        #[arg(short, long)]
        query: String,
        /// Report the witness terms of a true existential succedent.
        #[arg(long)]
        witness: bool,
    },
    /// Materialize the syntactic doctrine of the theory.
    Doctrine {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["CTX_BOUND", "SIZE_BOUND"], required = true)]
        materialize: Vec<usize>,
        #[arg(short, long)]
        out: PathBuf,
        /// Write the quantifier-free selection here.
        #[arg(long)]
        horn: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut run = RunReport::new(argv);
    run.flag("budget", json!(cli.budget));
    if let Some(b) = cli.bound {
        run.flag("bound", json!(b));
    }
    let start = Instant::now();
    if let Err(e) = dispatch(&cli, &mut run) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if cli.timing {
        run.set_wall(start.elapsed().as_millis());
    }
    run.print();
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&run.to_json()).expect("report serializes") + "\n";
        let written = if path.as_os_str() == "-" {
            std::io::Write::write_all(&mut std::io::stdout().lock(), text.as_bytes())
        } else {
            std::fs::write(path, text)
        };
        if let Err(e) = written {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if run.verdict() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn read_json(run: &mut RunReport, path: &Path) -> Result<Value> {
    let bytes = run.input(path)?;
    serde_json::from_slice(&bytes).with_context(|| format!("{}: invalid JSON", path.display()))
}

fn load(cli: &Cli, run: &mut RunReport, path: &Path) -> Result<LoadedDoctrine> {
    let mut v = read_json(run, path)?;
    if let (Some(b), Some(o)) = (cli.bound, v.as_object_mut()) {
        if o.contains_key("builder") {
            o.insert("bound".into(), json!(b));
        }
    }
    Ok(io::read_doctrine(&v)?)
}

/// Lazy doctrines are tabulated over their bounded object listing.
fn load_tab(cli: &Cli, run: &mut RunReport, path: &Path) -> Result<TabDoctrine> {
    Ok(match load(cli, run, path)? {
        LoadedDoctrine::Tabulated(t) => t,
        LoadedDoctrine::Localic(l) => tabulate_over(&l, l.base().objects()).doctrine,
    })
}

fn write_out(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    std::fs::write(path, text).with_context(|| format!("{}: cannot write", path.display()))
}

fn dot(cli: &Cli, name: &str, c: &FinCat) -> Result<()> {
    if let Some(p) = &cli.emit_dot {
        std::fs::write(p, io::emit_dot(name, c)).with_context(|| format!("{}: cannot write", p.display()))?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, run: &mut RunReport) -> Result<()> {
    match &cli.cmd {
        Cmd::Validate { file, level, sub } => {
            let lvl: Level = level.parse()?;
            run.flag("level", json!(level));
            let v = read_json(run, file)?;
            if v.get("builder").is_none() && v.get("fibers").is_none() {
                match io::read_base(&v)? {
                    Base::Finite(c) => run.push(validate_base(&c)),
                    Base::Generated(g) => run.push(validate_base(&g)),
                }
                return Ok(());
            }
            match load(cli, run, file)? {
                LoadedDoctrine::Tabulated(t) => {
                    run.push(validate_base(&t.base));
                    run.push(validate_doctrine(&t, lvl)?);
                    if let Some(s) = sub {
                        let sel = io::read_selection(&read_json(run, s)?, &t)?;
                        run.push(validate_subdoctrine(&Subdoctrine::from_selection(&t, &sel)?));
                    }
                }
                LoadedDoctrine::Localic(l) => {
                    if sub.is_some() {
                        bail!("selections need a tabulated doctrine");
                    }
                    run.push(validate_base(l.base()));
                    run.push(validate_doctrine(&l, lvl)?);
                }
            }
        }
        Cmd::Complete { file, kind, sub, out } => {
            let t = load_tab(cli, run, file)?;
            let src = match sub {
                Some(s) => {
                    let sel = io::read_selection(&read_json(run, s)?, &t)?;
                    Embedded::from_subdoctrine(&Subdoctrine::from_selection(&t, &sel)?).sub
                }
                None => t,
            };
            let (name, done) = match kind {
                Completion::Existential => {
                    let e = existential_completion(&src)?;
                    run.push(validate_doctrine(&e.doctrine, Level::Elementary)?);
                    run.push(validate_doctrine(&e.doctrine, Level::Existential)?);
                    ("existential", e.doctrine)
                }
                Completion::Comprehension => {
                    let d = comprehension_completion(&src).doctrine;
                    run.push(validate_base(&d.base));
                    run.push(validate_doctrine(&d, Level::Primary)?);
                    ("comprehension", d)
                }
                Completion::Extensional => {
                    let d = extensional_reflection(&src)?.doctrine;
                    run.push(validate_base(&d.base));
                    run.push(validate_doctrine(&d, Level::Primary)?);
                    ("extensional", d)
                }
            };
            run.flag("kind", json!(name));
            run.detail("fiber_sizes", json!(done.fibers.iter().map(|f| f.len()).collect::<Vec<_>>()));
            dot(cli, name, &done.base)?;
            if let Some(o) = out {
                write_out(o, &io::write_doctrine(&done, Some(json!({"completion": name}))))?;
            }
        }
        Cmd::Pred { file } => {
            let t = load_tab(cli, run, file)?;
            let p = pred_category(&t)?;
            run.detail("objects", json!(p.cat().num_objects()));
            run.detail("morphisms", json!(p.cat().num_morphisms()));
            dot(cli, "pred", p.cat())?;
            run.push(p.report);
        }
        Cmd::Reg { file } => {
            let t = load_tab(cli, run, file)?;
            let rc = reg_completion(&t, None, cli.budget)?;
            run.detail("objects", json!(rc.cat.num_objects()));
            run.detail("morphisms", json!(rc.cat.num_morphisms()));
            dot(cli, "reg", &rc.cat)?;
            run.push(rc.report.clone());
            run.push(check_regular(&t, &rc));
        }
        Cmd::Ex { file } => {
            let t = load_tab(cli, run, file)?;
            let ex = ex_completion(&t, None, cli.budget)?;
            run.detail("objects", json!(ex.cat.num_objects()));
            run.detail("morphisms", json!(ex.cat.num_morphisms()));
            dot(cli, "ex", &ex.cat)?;
            run.push(ex.report.clone());
            run.push(check_exactness(&ex));
            let rc = reg_completion(&t, None, cli.budget)?;
            let xr = ex_reg_crosscheck(&rc.cat, cli.budget)?;
            let mut eq = check_equivalence(&ex_comparison(&t, &ex, &rc, &xr)?);
            eq.check = "ex_vs_ex_of_reg".into();
            run.push(eq);
        }
        Cmd::Check { what, file, element, sub } => {
            if let Some(e) = element {
                if !matches!(what, CheckKind::Splitting) {
                    bail!("--element applies to splitting checks");
                }
                run.flag("element", json!(e));
            }
            match (what, load(cli, run, file)?) {
                (CheckKind::Cover, d) => {
                    let t = match d {
                        LoadedDoctrine::Tabulated(t) => t,
                        LoadedDoctrine::Localic(l) => tabulate_over(&l, l.base().objects()).doctrine,
                    };
                    cover(run, &t, sub.as_deref())?;
                }
                (_, LoadedDoctrine::Tabulated(t)) => check(run, &t, *what, element.as_deref())?,
                (_, LoadedDoctrine::Localic(l)) => check(run, &l, *what, element.as_deref())?,
            }
        }
        Cmd::Thm { which: Thm::Main { file, sub } } => {
            let t = load_tab(cli, run, file)?;
            let sel = io::read_selection(&read_json(run, sub)?, &t)?;
            let emb = Embedded::from_subdoctrine(&Subdoctrine::from_selection(&t, &sel)?);
            let m = verify_main_theorem(&t, &emb, cli.budget)?;
            let yn = |b: bool| if b { "yes" } else { "no" };
            run.detail("cover", json!(yn(m.cover)));
            run.detail("reg_equivalence", json!(yn(m.reg.pass)));
            run.detail("ex_equivalence", json!(yn(m.ex.pass)));
            run.detail("reports", json!({"cover": m.cover_report.to_json(), "reg": m.reg.to_json(), "ex": m.ex.to_json()}));
            run.push(m.report);
        }
        Cmd::Logic { which: Logic::Entail { file, query, witness } } => {
            let text = String::from_utf8(run.input(file)?).context("theory files are UTF-8")?;
            let (sig, axioms) = parse_theory(&text)?;
            let s = parse_sequent(&sig, query)?;
            let e = entails_empty(&sig, &axioms, &s.ctx, &s.lhs, &s.rhs)?;
            run.flag("query", json!(query));
            let mut r = Report::new("entailment");
            r.check("entails", e.verdict, || json!({"countermodel": e.countermodel}));
            run.push(r);
            run.detail(
                "sequent",
                json!(format!("{} | {} |- {}", show_context(&sig, &s.ctx), Show(&sig, &s.lhs), Show(&sig, &s.rhs))),
            );
            if *witness {
                run.flag("witness", json!(true));
                if let Some(w) = &e.witness {
                    run.detail("witness", serde_json::to_value(w)?);
                }
            }
        }
        Cmd::Logic { which: Logic::Doctrine { file, materialize, out, horn } } => {
            let text = String::from_utf8(run.input(file)?).context("theory files are UTF-8")?;
            let (sig, axioms) = parse_theory(&text)?;
            if !axioms.is_empty() {
                return Err(doctrina::Error::UnsupportedTheory(format!("{} axioms present", axioms.len())).into());
            }
            let (cb, sb) = (materialize[0], materialize[1]);
            if cb == 0 || sb == 0 {
                bail!("materialization bounds must be at least 1");
            }
            run.flag("materialize", json!([cb, sb]));
            let (t, sel) = materialize_with_horn(&sig, cb, sb)?;
            run.detail("fiber_sizes", json!(t.fibers.iter().map(|f| f.len()).collect::<Vec<_>>()));
            run.push(validate_doctrine(&t, Level::Existential)?);
            write_out(out, &io::write_doctrine(&t, Some(json!({"syntactic": {"ctx_bound": cb, "size_bound": sb}}))))?;
            if let Some(h) = horn {
                write_out(h, &io::write_selection(&sel, &t))?;
            }
        }
    }
    Ok(())
}

fn cover(run: &mut RunReport, t: &TabDoctrine, sub: Option<&Path>) -> Result<()> {
    match sub {
        Some(s) => {
            let sel = io::read_selection(&read_json(run, s)?, t)?;
            let member = |a: &usize, x: &usize| sel.sets[*a].contains(x);
            run.push(is_cover(t, &member));
        }
        None => {
            let found = find_cover(t);
            if let Some(sel) = &found.cover {
                run.detail("cover", io::write_selection(sel, t));
            }
            run.push(found.report);
        }
    }
    Ok(())
}

/// Resolves `OBJECT:ELEMENT`, where the element is a label or an index into
/// the class listing.
fn parse_element<D: Doctrine>(d: &D, spec: &str) -> Result<(doctrina::doctrine::Obj<D>, D::Elem)> {
    let (o, e) = spec.rsplit_once(':').ok_or_else(|| anyhow!("--element expects OBJECT:ELEMENT"))?;
    let c = d.base();
    let a = c.objects().into_iter().find(|a| c.obj_label(a) == o).ok_or_else(|| anyhow!("unknown object `{o}`"))?;
    let cls = d.classes(&a);
    let x = cls
        .iter()
        .find(|x| d.elem_label(&a, x) == e)
        .or_else(|| e.parse::<usize>().ok().and_then(|i| cls.get(i)))
        .ok_or_else(|| anyhow!("unknown element `{e}` over `{o}`"))?;
    Ok((a, x.clone()))
}

fn check<D: Doctrine>(run: &mut RunReport, d: &D, what: CheckKind, element: Option<&str>) -> Result<()> {
    let c = d.base();
    match what {
        CheckKind::Rc => run.push(has_rc(d)),
        CheckKind::Epsilon => run.push(epsilon_operators(d)),
        CheckKind::Splitting => {
            let elems: Vec<_> = match element {
                Some(spec) => vec![parse_element(d, spec)?],
                None => c.objects().into_iter().flat_map(|a| d.classes(&a).into_iter().map(move |x| (a.clone(), x))).collect(),
            };
            let mut r = Report::new("splitting");
            for (a, x) in &elems {
                let s = is_splitting(d, a, x, None);
                r.check("splitting", s.verdict, || {
                    let (b, beta) = s.counterexample.clone().expect("a failing element has a counterexample");
                    let ab = c.product(a, &b).map(|p| p.obj).expect("counterexamples live over listed products");
                    json!({"A": c.obj_label(a), "alpha": d.elem_label(a, x), "B": c.obj_label(&b), "beta": d.elem_label(&ab, &beta)})
                });
                if let Some(p) = s.prop_verdict {
                    r.check("splitting.forms_agree", p == s.verdict, || json!({"A": c.obj_label(a), "alpha": d.elem_label(a, x)}));
                }
                if elems.len() == 1 {
                    run.detail("witness_arrow", json!(s.witness.map(|h| c.mor_label(&h))));
                }
            }
            run.push(r);
        }
        CheckKind::Cover => unreachable!("covers are checked on tabulated doctrines"),
    }
    Ok(())
}
