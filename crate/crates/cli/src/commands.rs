use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use jumploci::arith::field::parse_rational;
use jumploci::arith::{Matrix, Rational};
use jumploci::cdga::{aomoto, betti_at, flat_connections, probe_components, verify_subspace_in_resonance, AomotoComplex, SubspaceVerdict};
use jumploci::hodge::{
    hodge_numbers, lambda_zero, quotient_hs, ses_bookkeeping, sub_hs, validate_1hs, verify_bdr_certificate, HodgeAxiom, OneHodgeStructure, SubHsOutcome,
};
use jumploci::par::Exec;
use jumploci::torus::{
    ax_lindemann_report, containment, exp_image, intersection, membership, vanishes_on_exp_image, vanishes_on_torus, ExponentGroup, Translate,
    TranslatedSubtorus, VanishingCertificate,
};
use jumploci::twisted::{compare_exp, sweep, torsion_sweep_set, twisted_betti, verify_torus_in_charvar, Character, LaurentComplex, TorusVerdict};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::args::{CharArgs, CharvarCmd, Cli, Command, CompareArgs, HodgeCmd, ResonanceArgs, SubArgs, TorusCmd};
use crate::cache::{self, Cache, CacheUse};
use crate::report::{self, CertKind, Outcome, Status};
use crate::workspace::{InputError, Kind, Mode, Workspace};

type Res<T> = std::result::Result<T, InputError>;

/// Everything a finished invocation writes.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs one command line; `env_cache` is the value of `JUMPLOCI_CACHE`.
pub fn run(argv: &[String], env_cache: Option<String>) -> RunOutput {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return RunOutput { stdout: e.to_string(), stderr: String::new(), code: 0 };
            }
            let err = InputError::Usage(e.kind().to_string());
            let outcome = Outcome::error(&err);
            let echo = echo(argv);
            let body = serde_json::to_string_pretty(&report::report(&echo, &outcome, 0.0, CacheUse::NotApplicable.as_str())).expect("serializable");
            return RunOutput { stdout: body + "\n", stderr: e.render().to_string(), code: 2 };
        }
    };
    let start = Instant::now();
    let cache_dir: Option<PathBuf> = env_cache.filter(|s| !s.is_empty()).map(PathBuf::from).or_else(|| cli.cache_dir.clone());
    let mut ctx = Ctx { seed: cli.seed, dual: cli.dual, cache: cache_dir.map(Cache::new), cache_use: CacheUse::NotApplicable, warnings: Vec::new() };
    let outcome = match dispatch(&cli, &mut ctx) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let doc = report::report(&echo(argv), &outcome, elapsed, ctx.cache_use.as_str());
    let stdout = if cli.json { serde_json::to_string(&doc) } else { serde_json::to_string_pretty(&doc) }.expect("serializable") + "\n";
    let mut stderr = String::new();
    for w in &ctx.warnings {
        stderr.push_str(&format!("warning: {w}\n"));
    }
    if !cli.json {
        stderr.push_str(&format!("[{}] {} ({}, {:.1} ms)\n", outcome.status.as_str(), outcome.summary, outcome.kind.as_str(), elapsed));
    }
    RunOutput { stdout, stderr, code: outcome.status.exit_code() }
}

/// The command line without the program name and the cache location.
fn echo(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--cache-dir" {
            it.next();
        } else if !a.starts_with("--cache-dir=") {
            out.push(a.clone());
        }
    }
    out
}

struct Ctx {
    seed: u64,
    dual: bool,
    cache: Option<Cache>,
    cache_use: CacheUse,
    warnings: Vec<String>,
}

impl Ctx {
    fn cached(&mut self, parts: &[&str], compute: impl FnOnce() -> Res<Outcome>) -> Res<Outcome> {
        let Some(c) = &self.cache else {
            self.cache_use = CacheUse::Disabled;
            return compute();
        };
        let seed = self.seed.to_string();
        let dual = self.dual.to_string();
        let mut all: Vec<&str> = parts.to_vec();
        all.extend(["seed", &seed, "dual", &dual]);
        let k = cache::key(&all);
        if let Some(o) = c.get(&k) {
            self.cache_use = CacheUse::Hit;
            return Ok(o);
        }
        let o = compute()?;
        if let Err(e) = c.put(&k, &o) {
            self.warnings.push(format!("could not write cache entry in {}: {e}", c.dir().display()));
        }
        self.cache_use = CacheUse::Miss;
        Ok(o)
    }
}

fn core(e: jumploci::Error) -> InputError {
    InputError::Usage(e.to_string())
}

fn load(cli: &Cli, mode: Mode) -> Res<Workspace> {
    Workspace::load(&cli.workspace, mode)
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Res<Outcome> {
    if ctx.dual && !matches!(cli.command, Command::Charvar(_)) {
        return Err(InputError::Usage("--dual applies only to charvar commands".into()));
    }
    match &cli.command {
        Command::Validate => validate(&load(cli, Mode::Lenient)?),
        Command::Hodge(HodgeCmd::Check(h)) => hodge_check(&load(cli, Mode::Lenient)?, &h.hodge),
        Command::Resonance(a) => resonance(&load(cli, Mode::Strict)?, a, ctx),
        Command::Charvar(c) => charvar(&load(cli, Mode::Strict)?, c, ctx),
        Command::CompareExp(a) => compare(&load(cli, Mode::Strict)?, a, ctx),
        Command::Torus(t) => torus(&load(cli, Mode::Strict)?, t),
        Command::Hodge(h) => hodge(&load(cli, Mode::Strict)?, h),
    }
}

fn rational_list(flag: &str, s: &str) -> Res<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_rational(t).map_err(|_| InputError::Usage(format!("{flag}: `{}` is not a rational number", t.trim())))).collect()
}

fn integer_rows(flag: &str, s: &str, width: usize) -> Res<jumploci::arith::IntMatrix> {
    let mut rows = Vec::new();
    for r in s.split(';').filter(|r| !r.trim().is_empty()) {
        let row: Vec<num_bigint::BigInt> =
            r.split_whitespace().map(|t| t.parse().map_err(|_| InputError::Usage(format!("{flag}: `{t}` is not an integer")))).collect::<Res<_>>()?;
        if row.len() != width {
            return Err(InputError::Usage(format!("{flag}: row has {} entries, expected {width}", row.len())));
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(width, rows))
}

fn check_len(what: &str, expected: usize, found: usize) -> Res<()> {
    if expected == found {
        Ok(())
    } else {
        Err(InputError::Usage(format!("{what} has {found} coordinates, expected {expected}")))
    }
}

fn validate(ws: &Workspace) -> Res<Outcome> {
    let objects: Vec<Value> = ws
        .index
        .iter()
        .map(|o| {
            json!({
                "kind": o.kind.as_str(),
                "name": o.name,
                "file": o.file,
                "line": o.line,
                "valid": o.violations.is_empty(),
                "violations": o.violations.iter().map(|v| json!({"invariant": v.invariant, "detail": v.detail})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let bad: Vec<Value> = objects.iter().filter(|o| o["valid"] == json!(false)).cloned().collect();
    let counts: serde_json::Map<String, Value> =
        Kind::ALL.iter().map(|k| (k.as_str().to_string(), json!(ws.index.iter().filter(|o| o.kind == *k).count()))).collect();
    let result = json!({"objects": objects, "counts": counts});
    if bad.is_empty() {
        Ok(Outcome::new(Status::Certified, CertKind::Exact, result, format!("{} objects, all valid", ws.index.len())))
    } else {
        let n = bad.len();
        Ok(Outcome::new(Status::Refuted, CertKind::Exact, result, format!("{n} of {} objects violate an invariant", ws.index.len())).with_witnesses(bad))
    }
}

fn resonance(ws: &Workspace, a: &ResonanceArgs, ctx: &mut Ctx) -> Res<Outcome> {
    let alg = ws.algebra(&a.algebra)?;
    let (ac, canon, target): (AomotoComplex, String, String) = match &a.module {
        Some(m) => {
            let md = ws.module(m)?;
            if md.value.algebra != a.algebra {
                return Err(InputError::Usage(format!("module `{m}` is over algebra `{}`, not `{}`", md.value.algebra, a.algebra)));
            }
            (md.value.module.aomoto(&alg.value), md.canon.clone(), format!("module {m}"))
        }
        None => (aomoto(&alg.value), alg.canon.clone(), format!("algebra {}", a.algebra)),
    };
    let chart = report::rat_rows(&flat_connections(&alg.value).vectors);
    let m = ac.num_vars();
    let (i, k) = (a.i, a.k);
    if let Some(p) = &a.point {
        let point = rational_list("--point", p)?;
        check_len("--point", m, point.len())?;
        let betti = betti_at(&ac, &point).map_err(core)?;
        let member = betti.get(i).copied().unwrap_or(0) >= k;
        let result = json!({"target": target, "i": i, "k": k, "point": report::rats(&point), "betti": betti, "member": member, "chart": chart});
        let summary = format!("{target}: point {} in R^{i}_{k}: {member} (betti {:?})", p, betti);
        return Ok(Outcome::new(Status::Computed, CertKind::Exact, result, summary));
    }
    let seed = ctx.seed;
    if let Some(sname) = &a.subspace {
        let l = ws.subspace(sname)?;
        check_len(&format!("subspace `{sname}`"), m, l.value.ambient())?;
        let params = format!("resonance-subspace {i} {k} {target} {sname}");
        return ctx.cached(&[&params, &canon, &l.canon], || {
            let base = json!({"target": target, "i": i, "k": k, "subspace": {"name": sname, "dim": l.value.dim(), "basis": report::rat_rows(l.value.basis())}, "chart": chart});
            Ok(match verify_subspace_in_resonance(&ac, &l.value, i, k, seed).map_err(core)? {
                SubspaceVerdict::Certified(c) => {
                    let mut r = base;
                    r["certificate"] = json!({"generic_betti": c.generic_betti, "generic_ranks": [c.generic_ranks.0, c.generic_ranks.1]});
                    Outcome::new(Status::Certified, CertKind::Exact, r, format!("subspace {sname} lies in R^{i}_{k} of {target} (generic b_{i} = {})", c.generic_betti))
                }
                SubspaceVerdict::Refuted { point, betti, generic_betti } => {
                    let w = json!({"point": report::rats(&point), "betti": betti, "generic_betti": generic_betti});
                    Outcome::new(Status::Refuted, CertKind::Exact, base, format!("subspace {sname} is not in R^{i}_{k} of {target}: b_{i} = {betti} < {k} at a rational point")).with_witnesses(vec![w])
                }
            })
        });
    }
    let trials = a.trials;
    let params = format!("resonance-probe {i} {k} {trials} {target}");
    ctx.cached(&[&params, &canon], || {
        let p = probe_components(&ac, i, k, trials, seed).map_err(core)?;
        let cands: Vec<Value> = p.candidates.iter().map(|l| json!({"dim": l.dim(), "basis": report::rat_rows(l.basis())})).collect();
        let n = cands.len();
        let result = json!({"target": target, "i": i, "k": k, "candidates": cands, "directions_tested": p.directions_tested, "exhaustive": p.exhaustive, "chart": chart});
        Ok(Outcome::new(Status::Computed, CertKind::Heuristic, result, format!("{n} certified candidate component(s) of R^{i}_{k} through 0 found by probing ({target})")))
    })
}

fn character(c: &LaurentComplex, a: &CharArgs, dual: bool) -> Res<(Character, Value)> {
    let q = match &a.character {
        Some(s) => rational_list("--char", s)?,
        None => vec![Rational::zero(); c.n()],
    };
    check_len("--char", c.n(), q.len())?;
    let mut rho = Character::torsion(q.clone());
    let order = rho.order();
    if a.numeric {
        rho = rho.to_numeric();
    }
    if dual {
        rho = rho.inverse();
    }
    Ok((rho, json!({"exponents": report::rats(&q), "order": order, "numeric": a.numeric})))
}

fn charvar(ws: &Workspace, cmd: &CharvarCmd, ctx: &mut Ctx) -> Res<Outcome> {
    let homology = if ctx.dual { "cohomology" } else { "homology" };
    match cmd {
        CharvarCmd::Betti(a) => {
            let (c, _) = ws.complex(&a.complex)?;
            let (rho, cv) = character(c, a, ctx.dual)?;
            let b = twisted_betti(c, &rho).map_err(core)?;
            let kind = if b.exact { CertKind::Exact } else { CertKind::Numeric };
            let result = json!({"complex": a.complex, "character": cv, "dual": ctx.dual, "groups": homology, "betti": b.dims});
            Ok(Outcome::new(Status::Computed, kind, result, format!("twisted {homology} dims of {}: {:?}", a.complex, b.dims)))
        }
        CharvarCmd::Member { at, i, k } => {
            let (c, _) = ws.complex(&at.complex)?;
            let (rho, cv) = character(c, at, ctx.dual)?;
            let b = twisted_betti(c, &rho).map_err(core)?;
            let kind = if b.exact { CertKind::Exact } else { CertKind::Numeric };
            let member = b.dims.get(*i).copied().unwrap_or(0) >= *k;
            let result = json!({"complex": at.complex, "character": cv, "dual": ctx.dual, "groups": homology, "i": i, "k": k, "betti": b.dims, "member": member});
            Ok(Outcome::new(Status::Computed, kind, result, format!("character in Σ^{i}_{k}({}): {member}", at.complex)))
        }
        CharvarCmd::Sweep { complex, i, k, count } => {
            let (c, canon) = ws.complex(complex)?;
            let (i, k, count, seed, dual) = (*i, *k, *count, ctx.seed, ctx.dual);
            let params = format!("charvar-sweep {i} {k} {count} {complex}");
            ctx.cached(&[&params, canon], || {
                let chars = torsion_sweep_set(c.n(), count, seed);
                let eval: Vec<Character> = if dual { chars.iter().map(Character::inverse).collect() } else { chars.clone() };
                let bettis = sweep(c, &eval, Exec::default()).map_err(core)?;
                let members: Vec<Value> = chars
                    .iter()
                    .zip(&bettis)
                    .filter(|(_, b)| b.dims.get(i).copied().unwrap_or(0) >= k)
                    .map(|(ch, b)| {
                        let Character::Torsion(q) = ch else { unreachable!("sweep characters are torsion") };
                        json!({"exponents": report::rats(q), "order": ch.order(), "betti": b.dims})
                    })
                    .collect();
                let n = members.len();
                let result = json!({"complex": complex, "i": i, "k": k, "dual": dual, "groups": homology, "tested": chars.len(), "members": members});
                Ok(Outcome::new(Status::Computed, CertKind::Exact, result, format!("{n} of {} sweep characters lie in Σ^{i}_{k}({complex})", chars.len())))
            })
        }
        CharvarCmd::VerifyTorus { complex, torus, i, k } => {
            let (c, canon) = ws.complex(complex)?;
            let t = ws.torus(torus)?;
            check_len(&format!("torus `{torus}`"), c.n(), t.value.ambient())?;
            let (i, k, seed, dual) = (*i, *k, ctx.seed, ctx.dual);
            let target = if ctx.dual { inverse_coset(&t.value)? } else { t.value.clone() };
            let params = format!("charvar-verify-torus {i} {k} {complex} {torus}");
            ctx.cached(&[&params, canon, &t.canon], || {
                let base = json!({"complex": complex, "torus": {"name": torus, "value": report::translated(&target)}, "i": i, "k": k, "dual": dual});
                Ok(match verify_torus_in_charvar(c, &target, i, k, seed).map_err(core)? {
                    TorusVerdict::Certified(cert) => {
                        let mut r = base;
                        r["certificate"] = json!({"generic_betti": cert.generic_betti, "generic_ranks": [cert.generic_ranks.0, cert.generic_ranks.1], "order": cert.order});
                        Outcome::new(Status::Certified, CertKind::Exact, r, format!("torus {torus} lies in Σ^{i}_{k}({complex}) (generic b_{i} = {})", cert.generic_betti))
                    }
                    TorusVerdict::Refuted { character, betti, generic_betti } => {
                        let w = json!({"character": report::rats(&character), "betti": betti, "generic_betti": generic_betti});
                        Outcome::new(Status::Refuted, CertKind::Exact, base, format!("torus {torus} is not in Σ^{i}_{k}({complex}): b_{i} = {betti} at a torsion point")).with_witnesses(vec![w])
                    }
                    TorusVerdict::NumericOnly { samples, all_members, witness } => {
                        let mut r = base;
                        r["samples"] = json!(samples);
                        r["all_members"] = json!(all_members);
                        let status = if all_members { Status::Computed } else { Status::Refuted };
                        let ws: Vec<Value> = witness.iter().map(|z| json!({"point": report::complexes(z)})).collect();
                        Outcome::new(status, CertKind::Numeric, r, format!("numeric translate: {samples} samples, all members: {all_members}")).with_witnesses(ws)
                    }
                })
            })
        }
    }
}

/// The coset of inverse characters.
fn inverse_coset(t: &TranslatedSubtorus) -> Res<TranslatedSubtorus> {
    match t.translate() {
        Translate::Torsion(q) => TranslatedSubtorus::torsion(t.torus().clone(), q.iter().map(|x| -x).collect()).map_err(core),
        Translate::Numeric(z) => TranslatedSubtorus::numeric(t.torus().clone(), z.iter().map(|x| 1.0 / x).collect()).map_err(core),
    }
}

fn compare(ws: &Workspace, a: &CompareArgs, ctx: &mut Ctx) -> Res<Outcome> {
    let alg = ws.algebra(&a.algebra)?;
    let (c, canon) = ws.complex(&a.complex)?;
    let (i, k, samples, den, seed) = (a.i, a.k, a.samples, a.denominator, ctx.seed);
    let params = format!("compare-exp {i} {k} {samples} {den} {} {}", a.algebra, a.complex);
    ctx.cached(&[&params, &alg.canon, canon], || {
        let r = compare_exp(&alg.value, c, i, k, samples, den, seed).map_err(core)?;
        let rows: Vec<Value> = r
            .samples
            .iter()
            .map(|s| json!({"omega": report::rats(&s.omega), "resonance": s.resonance, "charvar": s.charvar, "agree": s.agree, "on_candidate": s.on_candidate}))
            .collect();
        let bad: Vec<Value> = rows.iter().filter(|s| s["agree"] == json!(false)).cloned().collect();
        let cands: Vec<Value> = r.candidates.iter().map(|l| json!({"dim": l.dim(), "basis": report::rat_rows(l.basis())})).collect();
        let result = json!({"algebra": a.algebra, "complex": a.complex, "i": i, "k": k, "agreements": r.agreements, "disagreements": r.disagreements, "samples": rows, "candidates": cands});
        let summary = format!("R^{i}_{k} vs Σ^{i}_{k} near 0: {} agree, {} disagree", r.agreements, r.disagreements);
        let status = if bad.is_empty() { Status::Computed } else { Status::Refuted };
        Ok(Outcome::new(status, CertKind::Heuristic, result, summary).with_witnesses(bad))
    })
}

fn group(g: &ExponentGroup) -> Value {
    json!({"exponent": g.exponent, "coefficient": report::cyclotomic(&g.coefficient)})
}

fn vanishing(c: &VanishingCertificate) -> Value {
    json!({"vanishes": c.vanishes, "groups": c.groups.iter().map(group).collect::<Vec<_>>(), "witness": c.witness.as_ref().map(group)})
}

fn torus(ws: &Workspace, cmd: &TorusCmd) -> Res<Outcome> {
    let kind = |exact: bool| if exact { CertKind::Exact } else { CertKind::Numeric };
    match cmd {
        TorusCmd::ExpImage { affine } => {
            let v = ws.affine(affine)?;
            let t = exp_image(&v.value);
            let d = t.dim();
            Ok(Outcome::new(Status::Computed, CertKind::Exact, json!({"affine": affine, "image": report::translated(&t)}), format!("exp({affine}) is a translated subtorus of dimension {d}")))
        }
        TorusCmd::Member { torus, point } => {
            let t = ws.torus(torus)?;
            let w = rational_list("--point", point)?;
            check_len("--point", t.value.ambient(), w.len())?;
            let d = membership(&w, &t.value).map_err(core)?;
            Ok(Outcome::new(Status::Computed, kind(d.exact), json!({"torus": torus, "point": report::rats(&w), "member": d.value}), format!("exp(2πi·{point}) on {torus}: {}", d.value)))
        }
        TorusCmd::Contain { torus, container } => {
            let s = ws.torus(torus)?;
            let t = ws.torus(container)?;
            check_len(&format!("torus `{torus}`"), t.value.ambient(), s.value.ambient())?;
            let d = containment(&s.value, &t.value).map_err(core)?;
            Ok(Outcome::new(Status::Computed, kind(d.exact), json!({"torus": torus, "in": container, "contained": d.value}), format!("{torus} ⊆ {container}: {}", d.value)))
        }
        TorusCmd::Intersect { torus, with } => {
            let s = ws.torus(torus)?;
            let t = ws.torus(with)?;
            for (name, x) in [(torus, &s.value), (with, &t.value)] {
                if x.torsion_translate().is_none_or(|q| q.iter().any(|v| !v.is_zero())) {
                    return Err(InputError::Usage(format!("intersect needs subtori through the identity; `{name}` has a nontrivial translate")));
                }
            }
            let (r, comps) = intersection(s.value.torus(), t.value.torus()).map_err(core)?;
            let result = json!({"torus": torus, "with": with, "identity_component": report::subtorus(&r), "components": report::int(&comps)});
            Ok(Outcome::new(Status::Computed, CertKind::Exact, result, format!("{torus} ∩ {with}: {comps} component(s) of dimension {}", r.dim())))
        }
        TorusCmd::Vanish { zeroset, torus, affine } => {
            let z = ws.zeroset(zeroset)?;
            let (on, checks): (String, Vec<VanishingCertificate>) = match (torus, affine) {
                (Some(t), _) => {
                    let t = ws.torus(t)?;
                    check_len(&format!("zero set `{zeroset}`"), t.value.ambient(), z.value.vars.len())?;
                    (format!("torus {}", torus.as_deref().unwrap_or_default()), z.value.set.generators.iter().map(|f| vanishes_on_torus(f, &t.value)).collect::<jumploci::Result<_>>().map_err(core)?)
                }
                (None, Some(a)) => {
                    let v = ws.affine(a)?;
                    check_len(&format!("zero set `{zeroset}`"), v.value.ambient(), z.value.vars.len())?;
                    (format!("exp({a})"), z.value.set.generators.iter().map(|f| vanishes_on_exp_image(f, &v.value)).collect::<jumploci::Result<_>>().map_err(core)?)
                }
                (None, None) => unreachable!("clap requires one of --torus, --affine"),
            };
            let all = checks.iter().all(|c| c.vanishes);
            let witnesses: Vec<Value> =
                checks.iter().enumerate().filter(|(_, c)| !c.vanishes).map(|(j, c)| json!({"generator": j, "group": c.witness.as_ref().map(group)})).collect();
            let result = json!({"zeroset": zeroset, "on": on, "vanishes": all, "generators": checks.iter().map(vanishing).collect::<Vec<_>>()});
            let status = if all { Status::Certified } else { Status::Refuted };
            Ok(Outcome::new(status, CertKind::Exact, result, format!("{zeroset} vanishes on {on}: {all}")).with_witnesses(witnesses))
        }
        TorusCmd::Axl { affine, zeroset, dim } => {
            let v = ws.affine(affine)?;
            let z = ws.zeroset(zeroset)?;
            check_len(&format!("zero set `{zeroset}`"), v.value.ambient(), z.value.vars.len())?;
            let r = ax_lindemann_report(&v.value, &z.value.set, *dim).map_err(core)?;
            let ok = r.exp_in_zero_set && r.dims_match && r.predicted_verified;
            let result = json!({
                "affine": affine,
                "zeroset": zeroset,
                "exp_in_zero_set": r.exp_in_zero_set,
                "generator_checks": r.generator_checks.iter().map(vanishing).collect::<Vec<_>>(),
                "failing_generator": r.failing_generator,
                "dim_v": r.dim_v,
                "claimed_dim_w": r.claimed_dim_w,
                "dims_match": r.dims_match,
                "predicted": r.predicted.as_ref().map(report::translated),
                "predicted_verified": r.predicted_verified,
                "machine_checked": r.machine_checked,
                "assumed": r.assumed,
            });
            let mut witnesses = Vec::new();
            if let Some(j) = r.failing_generator {
                witnesses.push(json!({"generator": j, "group": r.generator_checks[j].witness.as_ref().map(group)}));
            }
            if !r.dims_match {
                witnesses.push(json!({"dim_v": r.dim_v, "claimed_dim_w": r.claimed_dim_w}));
            }
            let summary = if ok {
                format!("exp({affine}) ⊆ {zeroset} with matching dimension {}; predicted component verified", r.dim_v)
            } else {
                format!("Ax–Lindemann hypotheses fail for {affine}, {zeroset}")
            };
            Ok(Outcome::new(if ok { Status::Certified } else { Status::Refuted }, CertKind::Exact, result, summary).with_witnesses(witnesses))
        }
    }
}

fn structure(h: &OneHodgeStructure) -> Value {
    json!({
        "rank": h.rank(),
        "w": report::rat_rows(h.w_basis()),
        "f": h.f_basis().iter().map(|r| r.iter().map(report::cyclotomic).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn axiom(a: &HodgeAxiom) -> &'static str {
    match a {
        HodgeAxiom::DirectSum => "W_C = (W_C ∩ F) ⊕ (W_C ∩ F̄)",
        HodgeAxiom::Spanning => "Λ_C = W_C + F",
    }
}

fn hodge_check(ws: &Workspace, name: &str) -> Res<Outcome> {
    let h = ws.hodge_structure(name)?;
    let r = validate_1hs(&h.value);
    let result = json!({
        "hodge": name,
        "valid": r.is_valid(),
        "rank": r.rank,
        "dim_w": r.dim_w,
        "dim_w_cap_f": r.dim_w_cap_f,
        "dim_w_cap_fbar": r.dim_w_cap_fbar,
        "dim_pieces_sum": r.dim_pieces_sum,
        "dim_w_plus_f": r.dim_w_plus_f,
    });
    if r.is_valid() {
        Ok(Outcome::new(Status::Certified, CertKind::Exact, result, format!("{name} is a 1-Hodge structure")))
    } else {
        let w: Vec<Value> = r.failures.iter().map(|a| json!({"axiom": axiom(a)})).collect();
        Ok(Outcome::new(Status::Refuted, CertKind::Exact, result, format!("{name} fails {} axiom(s)", w.len())).with_witnesses(w))
    }
}

fn sub_outcome(ws: &Workspace, a: &SubArgs) -> Res<(SubHsOutcome, jumploci::arith::IntMatrix)> {
    let h = ws.hodge_structure(&a.hodge)?;
    let m = integer_rows("--lattice", &a.lattice, h.value.rank())?;
    Ok((sub_hs(&h.value, &m).map_err(core)?, m))
}

fn hodge(ws: &Workspace, cmd: &HodgeCmd) -> Res<Outcome> {
    match cmd {
        HodgeCmd::Check(h) => hodge_check(ws, &h.hodge),
        HodgeCmd::Numbers(h) => {
            let n = hodge_numbers(&ws.hodge_structure(&h.hodge)?.value).map_err(core)?;
            let result = json!({"hodge": h.hodge, "h10": n.h10, "h01": n.h01, "h11": n.h11});
            Ok(Outcome::new(Status::Computed, CertKind::Exact, result, format!("h^{{1,0}} = {}, h^{{0,1}} = {}, h^{{1,1}} = {}", n.h10, n.h01, n.h11)))
        }
        HodgeCmd::Lambda0(h) => {
            let l = lambda_zero(&ws.hodge_structure(&h.hodge)?.value);
            let result = json!({"hodge": h.hodge, "rank": l.rows(), "lattice": report::int_matrix(&l)});
            Ok(Outcome::new(Status::Computed, CertKind::Exact, result, format!("Λ₀ has rank {}", l.rows())))
        }
        HodgeCmd::Sub(a) => {
            let (o, m) = sub_outcome(ws, a)?;
            let base = json!({"hodge": a.hodge, "lattice": report::int_matrix(&m)});
            Ok(match o {
                SubHsOutcome::Witness(w) => {
                    let mut r = base;
                    r["witness"] = json!({"sublattice": report::int_matrix(&w.sublattice), "structure": structure(&w.structure)});
                    Outcome::new(Status::Certified, CertKind::Exact, r, format!("the lattice carries a sub 1-Hodge structure of {}", a.hodge))
                }
                SubHsOutcome::Refused(reason) => {
                    Outcome::new(Status::Refuted, CertKind::Exact, base, format!("not a sub 1-Hodge structure: {reason}")).with_witnesses(vec![json!({"reason": reason})])
                }
            })
        }
        HodgeCmd::Quotient(a) => {
            let (o, m) = sub_outcome(ws, a)?;
            let base = json!({"hodge": a.hodge, "lattice": report::int_matrix(&m)});
            Ok(match o {
                SubHsOutcome::Witness(w) => {
                    let q = quotient_hs(&ws.hodge_structure(&a.hodge)?.value, &w).map_err(core)?;
                    let mut r = base;
                    r["quotient"] = structure(&q);
                    Outcome::new(Status::Computed, CertKind::Exact, r, format!("quotient of rank {}", q.rank()))
                }
                SubHsOutcome::Refused(reason) => {
                    Outcome::new(Status::Refuted, CertKind::Exact, base, format!("no quotient: {reason}")).with_witnesses(vec![json!({"reason": reason})])
                }
            })
        }
        HodgeCmd::BdrVerify { bdr } => {
            let b = ws.bdr(bdr)?;
            let h = ws.hodge_structure(&b.value.hodge)?;
            let r = verify_bdr_certificate(&h.value, &b.value.certificate).map_err(core)?;
            let pieces: Vec<Value> = r
                .pieces
                .iter()
                .zip(&b.value.certificate.pieces)
                .map(|(p, src)| {
                    json!({
                        "lattice": report::int_matrix(&src.lattice),
                        "translate": report::rats(&src.translate),
                        "certified": p.certified,
                        "reason": p.reason,
                        "hodge_numbers": p.hodge_numbers.map(|n| json!({"h10": n.h10, "h01": n.h01, "h11": n.h11})),
                        "witness_supplied": p.witness_supplied,
                    })
                })
                .collect();
            let bad: Vec<Value> = pieces.iter().enumerate().filter(|(_, p)| p["certified"] == json!(false)).map(|(j, p)| json!({"piece": j, "reason": p["reason"]})).collect();
            let n = pieces.len();
            let result = json!({"bdr": bdr, "hodge": b.value.hodge, "pieces": pieces});
            Ok(if bad.is_empty() {
                Outcome::new(Status::Certified, CertKind::Exact, result, format!("all {n} piece(s) of {bdr} are cut out by sub 1-Hodge structures"))
            } else {
                let m = bad.len();
                Outcome::new(Status::Refuted, CertKind::Exact, result, format!("{m} of {n} piece(s) of {bdr} fail")).with_witnesses(bad)
            })
        }
        HodgeCmd::Ses(h) => {
            let r = ses_bookkeeping(&ws.hodge_structure(&h.hodge)?.value).map_err(core)?;
            let result = json!({
                "hodge": h.hodge,
                "rank": r.rank,
                "rank_lambda0": r.rank_lambda0,
                "dim_w": r.dim_w,
                "h11": r.h11,
                "top_row_exact": r.top_row_exact,
                "bottom_row_exact": r.bottom_row_exact,
                "vertical_bijection": r.vertical_bijection,
            });
            Ok(if r.is_exact() {
                Outcome::new(Status::Certified, CertKind::Exact, result, "both rows exact, Λ₀ ⊗ C ≅ W_C")
            } else {
                let w = vec![json!({"top_row_exact": r.top_row_exact, "bottom_row_exact": r.bottom_row_exact, "vertical_bijection": r.vertical_bijection})];
                Outcome::new(Status::Refuted, CertKind::Exact, result, "dimension bookkeeping fails").with_witnesses(w)
            })
        }
    }
}
