use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use gummcalc::abelian::{
    abelianization_map, comparison_targets, diagonal_punctuation, direction as direction_of, dp_split as split_of,
    find_maltsev_ops, find_subtractions, group_from_subtraction, verify_universality,
};
use gummcalc::algebra::{cube as cube_power, product};
use gummcalc::congruence::{all_congruences, BinaryRelation};
use gummcalc::connector::{
    centralize, check_axiom_star_instance, check_connector, find_category_structures, find_groupoid_structure,
    find_maltsev_preconnectors, scan_pointed_axiom_star,
};
use gummcalc::gumm::{check_cube_all, check_hex, check_hypo_terms, check_lattice_modular, check_shifting_all, scan_punctual};
use gummcalc::oracle::{oracle_all_congruences, oracle_all_functions, oracle_group_abelianization, oracle_is_homomorphism};
use gummcalc::{Congruence, Error, FiniteAlgebra, Homomorphism, Partition};

use crate::dot::{graph_dot, lattice_dot};
use crate::load;
use crate::report::{to_value, OracleRun, Report, Status};
use crate::{CliError, Ctx, Output};

type Out = Result<Output, CliError>;

fn done(r: Report) -> Out {
    Ok(Output::Report(r))
}

/// Records the oracle verdict; a disagreement fails the report.
fn attach_oracle(r: &mut Report, verdict: gummcalc::Result<bool>, what: &str) {
    let run = match verdict {
        Ok(agrees) => OracleRun { agrees: Some(agrees), note: what.to_string() },
        Err(Error::CapExceeded { what: w, limit }) => {
            OracleRun { agrees: None, note: format!("oracle over cap: {w} (limit {limit})") }
        }
        Err(e) => OracleRun { agrees: None, note: format!("oracle not applicable: {e}") },
    };
    if run.agrees == Some(false) {
        r.status = Status::Fail;
        if r.witness.is_none() {
            r.witness = Some(json!({ "oracle": what }));
        }
    }
    r.oracle = Some(run);
}

fn no_oracle(r: &mut Report, ctx: &Ctx) {
    if ctx.oracle {
        r.oracle = Some(OracleRun { agrees: None, note: "no oracle".into() });
    }
}

fn sorted(mut ps: Vec<Partition>) -> Vec<Partition> {
    ps.sort_by(|a, b| a.canonical_cmp(b));
    ps
}

fn lattice_oracle(a: &FiniteAlgebra, fast: &[Partition]) -> gummcalc::Result<bool> {
    Ok(sorted(oracle_all_congruences(a)?) == sorted(fast.to_vec()))
}

fn congruence(a: &FiniteAlgebra, text: &str) -> Result<Partition, CliError> {
    let p = load::blocks(text, a.size())?;
    Ok(Congruence::new(a, p)?.into_partition())
}

pub fn con(mut r: Report, file: &Path, ctx: &Ctx) -> Out {
    let a = load::algebra(file)?;
    let lat = all_congruences(&a, &ctx.caps)?;
    let parts: Vec<Partition> = lat.elements().iter().map(|c| c.partition().clone()).collect();
    r.count("congruences", lat.len()).count("covers", lat.hasse_edges().len());
    r.summary = format!("{} congruences", lat.len());
    r.details = json!({ "congruences": parts, "hasse": lat.hasse_edges() });
    if ctx.oracle {
        attach_oracle(&mut r, lattice_oracle(&a, &parts), "all partitions filtered by compatibility");
    }
    if ctx.dot {
        return Ok(Output::Dot(lattice_dot(&lat), r));
    }
    done(r)
}

pub fn shifting(mut r: Report, file: &Path, ctx: &Ctx) -> Out {
    let a = load::algebra(file)?;
    let rep = check_shifting_all(&a, &ctx.caps)?;
    r.count("congruences", rep.congruences)
        .count("admissible", rep.admissible)
        .count("failures", rep.failures.len());
    let verdict = if rep.passed() { "all pass".to_string() } else { format!("{} fail", rep.failures.len()) };
    r.summary = format!("{} congruences, {} admissible triples, {verdict}", rep.congruences, rep.admissible);
    if let Some(w) = rep.canonical_witness() {
        r.fail(w);
    }
    if ctx.oracle {
        let fast = all_congruences(&a, &ctx.caps)?;
        let parts: Vec<Partition> = fast.elements().iter().map(|c| c.partition().clone()).collect();
        attach_oracle(&mut r, lattice_oracle(&a, &parts), "congruence lattice");
    }
    done(r)
}

pub fn modular(mut r: Report, file: &Path, ctx: &Ctx) -> Out {
    let a = load::algebra(file)?;
    let rep = check_lattice_modular(&a, &ctx.caps)?;
    r.count("congruences", rep.congruences).count("checked", rep.checked);
    r.summary = format!(
        "{} congruences, {} triples checked, {}",
        rep.congruences,
        rep.checked,
        if rep.passed() { "modular" } else { "not modular" }
    );
    if let Some(w) = &rep.failure {
        r.fail(json!({ "t": w[0], "s": w[1], "r": w[2] }));
    }
    if ctx.oracle {
        let fast = all_congruences(&a, &ctx.caps)?;
        let parts: Vec<Partition> = fast.elements().iter().map(|c| c.partition().clone()).collect();
        attach_oracle(&mut r, lattice_oracle(&a, &parts), "congruence lattice");
    }
    done(r)
}

pub fn cube(mut r: Report, file: &Path, ctx: &Ctx) -> Out {
    let a = load::algebra(file)?;
    let rep = check_cube_all(&a, &ctx.caps)?;
    r.count("congruences", rep.congruences)
        .count("admissible", rep.admissible)
        .count("failures", rep.failures.len());
    r.summary = format!("{} congruences, {} admissible triples, {} fail", rep.congruences, rep.admissible, rep.failures.len());
    if let Some((t, s, rr, tuple)) = rep.failures.first() {
        r.fail(json!({ "t": t, "s": s, "r": rr, "tuple": tuple }));
    }
    no_oracle(&mut r, ctx);
    done(r)
}

pub fn hex(mut r: Report, file: &Path, circ: &str, upsilon: &str) -> Out {
    let a = load::algebra(file)?;
    if check_hex(&a, circ, upsilon)? {
        r.summary = format!("a{circ}0 = 0{circ}a and {upsilon}(a{circ}0) = a hold");
    } else {
        let (zero, n) = (a.require_point()?, a.size());
        let c = &a.op_checked(circ, 2)?.table;
        let u = &a.op_checked(upsilon, 1)?.table;
        let x = (0..n).find(|&x| c[x * n + zero] != c[zero * n + x] || u[c[x * n + zero]] != x).unwrap_or(0);
        r.summary = format!("fails at a = {x}");
        r.fail([x]);
    }
    done(r)
}

pub fn hypo(mut r: Report, file: &Path, d: &str, eps: &str) -> Out {
    let a = load::algebra(file)?;
    if check_hypo_terms(&a, d, eps)? {
        r.summary = format!("{d}(a,a) = 0 and {eps}({d}(a,0)) = a hold");
    } else {
        let (zero, n) = (a.require_point()?, a.size());
        let dt = &a.op_checked(d, 2)?.table;
        let e = &a.op_checked(eps, 1)?.table;
        let x = (0..n).find(|&x| dt[x * n + x] != zero || e[dt[x * n + zero]] != x).unwrap_or(0);
        r.summary = format!("fails at a = {x}");
        r.fail([x]);
    }
    done(r)
}

pub fn subtraction(mut r: Report, file: &Path, ctx: &Ctx) -> Out {
    let a = load::algebra(file)?;
    let zero = a.require_point()?;
    let subs = find_subtractions(&a, &ctx.caps)?;
    r.count("subtractions", subs.len());
    r.summary = format!("{} internal subtraction(s)", subs.len());
    let details: Vec<_> = subs
        .iter()
        .map(|s| match group_from_subtraction(s) {
            Ok(g) => json!({ "table": s.table(), "group": g }),
            Err(e) => json!({ "table": s.table(), "group_error": e.to_string() }),
        })
        .collect();
    r.details = json!(details);
    if ctx.oracle {
        let verdict = (|| {
            let n = a.size();
            let sq = product(&a, &a)?;
            let mut fixed = vec![None; n * n];
            for x in 0..n {
                fixed[x * n + x] = Some(zero);
                fixed[x * n + zero] = Some(x);
            }
            let oracle = oracle_all_functions(n, 2, &fixed, |t| oracle_is_homomorphism(&sq, &a, t))?;
            let fast: Vec<Vec<usize>> = subs.iter().map(|s| s.table().to_vec()).collect();
            Ok(oracle == fast)
        })();
        attach_oracle(&mut r, verdict, "all binary functions filtered");
    }
    done(r)
}

pub fn maltsev(mut r: Report, file: &Path, ctx: &Ctx) -> Out {
    let a = load::algebra(file)?;
    let ops = find_maltsev_ops(&a, &ctx.caps)?;
    let autonomous = ops.iter().filter(|p| p.autonomous).count();
    r.count("maltsev_ops", ops.len()).count("autonomous", autonomous);
    r.summary = format!("{} internal Mal'tsev operation(s), {autonomous} autonomous", ops.len());
    r.details = json!(ops
        .iter()
        .map(|p| json!({ "table": p.p.map(), "autonomous": p.autonomous, "associative": p.associative }))
        .collect::<Vec<_>>());
    if ctx.oracle {
        let verdict = (|| {
            let n = a.size();
            let c = cube_power(&a)?;
            let mut fixed = vec![None; n * n * n];
            for x in 0..n {
                for y in 0..n {
                    fixed[(x * n + y) * n + y] = Some(x);
                    fixed[(y * n + y) * n + x] = Some(x);
                }
            }
            let oracle = oracle_all_functions(n, 3, &fixed, |t| oracle_is_homomorphism(&c, &a, t))?;
            let fast: Vec<Vec<usize>> = ops.iter().map(|p| p.p.map().to_vec()).collect();
            Ok(oracle == fast)
        })();
        attach_oracle(&mut r, verdict, "all ternary functions filtered");
    }
    done(r)
}

fn unverified(v: &gummcalc::abelian::Verified) -> Vec<&'static str> {
    let mut out = Vec::new();
    if !v.regular_pushout {
        out.push("regular_pushout");
    }
    if !v.group_laws {
        out.push("group_laws");
    }
    if !v.star_identity {
        out.push("star_identity");
    }
    out
}

pub fn dp(mut r: Report, file: &Path, ctx: &Ctx) -> Out {
    let a = load::algebra(file)?;
    let dp = diagonal_punctuation(&a, &ctx.caps)?;
    let eta = abelianization_map(&dp)?;
    r.count("dp_size", dp.size());
    r.summary = format!("|Dp| = {}", dp.size());
    r.details = json!({ "dp": dp.summary(), "eta": eta.map() });
    let bad = unverified(&dp.verified);
    if !bad.is_empty() {
        r.fail(bad);
    }
    if ctx.oracle {
        let op = ["+", "*"].into_iter().find(|o| a.op(o).is_some_and(|op| op.arity == 2));
        let verdict = match op {
            Some(op) => oracle_group_abelianization(&a, op).map(|p| p == Partition::from_labels(eta.map())),
            None => Err(Error::Invalid("no binary `+` or `*`".into())),
        };
        attach_oracle(&mut r, verdict, "cosets of the derived subgroup");
    }
    done(r)
}

pub fn dp_split(mut r: Report, file: &Path, epi: &Path, section: &Path, base: Option<&Path>, ctx: &Ctx) -> Out {
    let x = load::algebra(file)?;
    let f = load::map(epi)?;
    let s = load::map(section)?;
    let y = load::base(&x, &f, base)?;
    let se = load::split_epi(&x, &y, f, s)?;
    let sa = split_of(&se, &ctx.caps)?;
    let targets = comparison_targets(&sa, &ctx.caps)?;
    let uni = verify_universality(&sa, &targets, &ctx.caps)?;
    let bijective = sa.comparison.is_injective() && sa.comparison.is_surjective();
    r.count("dp_size", sa.size())
        .count("base_size", y.size())
        .count("targets", uni.targets.len())
        .count("factorizations", uni.morphisms);
    r.summary = format!(
        "|Dp[f]| = {} over |Y| = {}, comparison {}, {} factorization(s) checked",
        sa.size(),
        y.size(),
        if bijective { "bijective" } else { "not bijective" },
        uni.morphisms
    );
    r.details = json!({ "split": sa.summary(), "comparison": sa.comparison.map(), "universality": uni });
    let bad = unverified(&sa.verified);
    if !bad.is_empty() {
        r.fail(bad);
    } else if let Some(f) = uni.failures.first() {
        r.fail(json!({ "target": f.0, "h": f.1 }));
    }
    no_oracle(&mut r, ctx);
    done(r)
}

pub fn direction(mut r: Report, file: &Path, onto: &Path, base: Option<&Path>, ctx: &Ctx) -> Out {
    let x = load::algebra(file)?;
    let map = load::map(onto)?;
    let y = load::base(&x, &map, base)?;
    let f = Homomorphism::new(x, y.clone(), map)?;
    let d = direction_of(&f, &ctx.caps)?;
    r.count("direction_size", d.size()).count("base_size", y.size());
    r.summary = format!("|A(f)| = {} over |Y| = {}", d.size(), y.size());
    r.details = to_value(d.summary());
    no_oracle(&mut r, ctx);
    done(r)
}

pub fn connector(mut r: Report, file: &Path, rb: &str, sb: &str, ctx: &Ctx) -> Out {
    let x = load::algebra(file)?;
    let rp = congruence(&x, rb)?;
    let sp = congruence(&x, sb)?;
    let found = find_maltsev_preconnectors(&x, &rp, &sp, &ctx.caps)?;
    r.count("maltsev_preconnectors", found.len());
    match centralize(&x, &rp, &sp, &ctx.caps)? {
        Some(c) => {
            let rep = check_connector(&c.pre);
            r.count("connectors", 1);
            r.summary = format!("connector exists on {} chains", c.pre.chain.len());
            let table: Vec<_> = (0..c.pre.chain.len()).map(|i| (c.pre.chain.triple(i), c.pre.table[i])).collect();
            r.details = json!({ "report": rep, "table": table });
        }
        None => {
            r.count("connectors", 0);
            r.summary = format!("no connector ({} Mal'tsev preconnector(s) found)", found.len());
            r.fail(json!({ "r": rp, "s": sp }));
        }
    }
    no_oracle(&mut r, ctx);
    done(r)
}

pub fn category(mut r: Report, path: &Path, ctx: &Ctx) -> Out {
    let g = load::graph(path)?;
    let cats = find_category_structures(&g, &ctx.caps)?;
    r.count("structures", cats.len());
    r.summary = format!("{} internal category structure(s)", cats.len());
    r.details = json!(cats.iter().map(|c| c.summary()).collect::<Vec<_>>());
    no_oracle(&mut r, ctx);
    if ctx.dot {
        return Ok(Output::Dot(graph_dot(&g), r));
    }
    done(r)
}

pub fn groupoid(mut r: Report, path: &Path, ctx: &Ctx) -> Out {
    let g = load::graph(path)?;
    match find_groupoid_structure(&g, &ctx.caps)? {
        Some(gr) => {
            r.count("groupoids", 1);
            r.summary = format!(
                "groupoid on {} arrows over {} objects{}",
                g.x1.size(),
                g.x0.size(),
                if gr.agrees_with_category { ", matches the category structure" } else { "" }
            );
            r.details = to_value(gr.summary());
            if !gr.agrees_with_category {
                r.fail("connector composition differs from the category structure");
            }
        }
        None => {
            r.count("groupoids", 0);
            r.summary = "no connector on the kernel pairs of d0 and d1".into();
            r.fail(json!({ "d0": g.d0.map(), "d1": g.d1.map() }));
        }
    }
    no_oracle(&mut r, ctx);
    if ctx.dot {
        return Ok(Output::Dot(graph_dot(&g), r));
    }
    done(r)
}

pub fn axiom_star(mut r: Report, x: &Path, z: &Path, relation: Option<&Path>, t: Option<&str>, ctx: &Ctx) -> Out {
    let xa = load::algebra(x)?;
    let za = load::algebra(z)?;
    match relation {
        None => {
            if t.is_some() {
                return Err(CliError::Usage("--t needs --relation".into()));
            }
            let scan = scan_pointed_axiom_star(&xa, &za, &ctx.caps)?;
            r.count("relations", scan.relations)
                .count("instances", scan.instances)
                .count("failures", scan.failures.len());
            r.summary = format!("{} relations, {} instances, {} fail", scan.relations, scan.instances, scan.failures.len());
            if let Some((w, t)) = scan.failures.first() {
                r.fail(json!({ "w": w, "t": t }));
            }
        }
        Some(path) => {
            let w = BinaryRelation::new(xa.clone(), za.clone(), load::pairs(path)?)?;
            let emb = w.embed()?;
            let ts: Vec<Partition> = match t {
                Some(text) => vec![load::blocks(text, emb.len())?],
                None => all_congruences(&emb.alg, &ctx.caps)?.elements().iter().map(|c| c.partition().clone()).collect(),
            };
            let mut failures = Vec::new();
            for tp in &ts {
                if !check_axiom_star_instance(&w, tp)? {
                    failures.push(tp.clone());
                }
            }
            r.count("instances", ts.len()).count("failures", failures.len());
            r.summary = format!("{} instance(s) on |W| = {}, {} fail", ts.len(), emb.len(), failures.len());
            r.details = json!({ "w": w.pairs() });
            if let Some(tp) = failures.first() {
                r.fail(json!({ "w": w.pairs(), "t": tp }));
            }
        }
    }
    no_oracle(&mut r, ctx);
    done(r)
}

pub fn punctual(mut r: Report, x: &Path, z: &Path, ctx: &Ctx) -> Out {
    let xa: Arc<FiniteAlgebra> = load::algebra(x)?;
    let za = load::algebra(z)?;
    let scan = scan_punctual(&xa, &za, &ctx.caps)?;
    r.count("relations", scan.relations)
        .count("hyper_instances", scan.hyper_instances)
        .count("hypo_instances", scan.hypo_instances);
    let failures = scan.hyper_failures.len() + scan.hypo_failures.len() + scan.cm_failures.len() + scan.cokernel_failures.len();
    r.count("failures", failures);
    r.summary = format!("{} punctual relations, {failures} failing checks", scan.relations);
    if !scan.passed() {
        r.fail(json!({
            "hyper": scan.hyper_failures.first(),
            "hypo": scan.hypo_failures.first(),
            "cm": scan.cm_failures.first(),
            "cokernel": scan.cokernel_failures.first(),
        }));
    }
    no_oracle(&mut r, ctx);
    done(r)
}
