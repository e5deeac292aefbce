//! One function per subcommand. Each returns the report in both formats.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use gw_core::oracle::{
    factorization_trials, lemma_trials, oracle_agreement, oracle_relation_check, orthogonal_group, TrialReport,
    DEFAULT_CLASSIFY_CAP, DEFAULT_VISITED_CAP,
};
use gw_core::presentation::{tower_check, EnumerationOptions, DEFAULT_ENUMERATION_CAP};
use gw_core::smith::cokernel;
use gw_core::{Execution, Family, GwError, GwRing, RingSpec, SquareClassGroup};

use crate::render::{bigs, combination, family_json, group_json, group_text, tuple};
use crate::{Config, VerifyTarget};

pub struct Outcome {
    pub passed: bool,
    pub json: Value,
    pub text: String,
}

fn envelope(command: &str, passed: bool, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(1));
    out.insert("command".into(), json!(command));
    out.insert("passed".into(), json!(passed));
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

fn options(cfg: &Config) -> EnumerationOptions {
    EnumerationOptions {
        cap: cfg.cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
        seed: cfg.seed,
        exec: Execution::default(),
    }
}

fn ring_for(cfg: &Config, spec: RingSpec) -> Result<GwRing, GwError> {
    let ring = GwRing::compute(spec, &options(cfg))?;
    if let Some(info) = ring.sampled() {
        if cfg.exact {
            let needed = info.even.tuples_total.max(info.odd.tuples_total);
            return Err(GwError::CapExceeded { needed, cap: info.cap });
        }
        eprintln!("warning: {spec}: relations sampled (cap {}); results may be incomplete", info.cap);
    }
    Ok(ring)
}

pub fn compute(cfg: &Config, ring: &str) -> Result<Outcome, GwError> {
    let spec = RingSpec::parse(ring)?;
    let r = ring_for(cfg, spec)?;
    let (gw, witt) = (r.gw(), r.witt());
    let classes = gw.classes();
    let reps: Vec<String> = (0..classes.num_classes()).map(|c| classes.format_class(c)).collect();

    let table = gw.structure_table()?;
    let mut mult = Map::new();
    let mut mult_text = String::new();
    for (i, row) in table.iter().enumerate() {
        let mut inner = Map::new();
        for (j, prod) in row.iter().enumerate() {
            inner.insert(gw.labels()[j].clone(), bigs(prod.coords()));
            if j >= i {
                let _ = writeln!(
                    mult_text,
                    "  {} * {} = {}",
                    gw.labels()[i],
                    gw.labels()[j],
                    combination(gw, prod)
                );
            }
        }
        mult.insert(gw.labels()[i].clone(), Value::Object(inner));
    }

    let p = r.presentation();
    let sampled = r.sampled().is_some();
    let body = json!({
        "ring": spec.to_string(),
        "square_classes": {
            "count": classes.num_classes(),
            "representatives": reps,
            "minus_one": classes.format_class(classes.minus_one()),
        },
        "relations": {
            "count": p.relations().len(),
            "even": family_json(&p.even_report()),
            "odd": family_json(&p.odd_report()),
        },
        "gw": group_json(gw),
        "witt": group_json(witt),
        "mult_table": mult,
        "sampled": sampled,
    });

    let mut text = format!("ring: {spec}\n");
    let _ = writeln!(text, "square classes ({}): {}", classes.num_classes(), reps.join(" "));
    let _ = writeln!(
        text,
        "relations: {}{}",
        p.relations().len(),
        if sampled { " (sampled)" } else { "" }
    );
    text.push_str(&group_text("GW", gw));
    text.push_str(&group_text("W", witt));
    text.push_str("products:\n");
    text.push_str(&mult_text);
    Ok(Outcome {
        passed: true,
        json: envelope("compute", true, body),
        text,
    })
}

pub fn square_classes(ring: &str) -> Result<Outcome, GwError> {
    let spec = RingSpec::parse(ring)?;
    let g = SquareClassGroup::compute(spec);
    let reps: Vec<String> = (0..g.num_classes()).map(|c| g.format_class(c)).collect();
    let basis: Vec<String> = g.f2_basis().iter().map(|&c| g.format_class(c)).collect();
    let mut members = Map::new();
    for c in 0..g.num_classes() {
        let m: Vec<String> = spec.units_raw().filter(|&u| g.class_of(u) == c).map(|u| spec.format(u)).collect();
        members.insert(g.format_class(c), json!(m));
    }
    let body = json!({
        "ring": spec.to_string(),
        "units": spec.num_units().to_string(),
        "count": g.num_classes(),
        "representatives": reps,
        "minus_one": g.format_class(g.minus_one()),
        "f2_basis": basis,
        "members": members,
    });
    let mut text = format!("ring: {spec}\nunits: {}\n", spec.num_units());
    let _ = writeln!(text, "square classes ({}): {}", g.num_classes(), reps.join(" "));
    let _ = writeln!(text, "class of -1: {}", g.format_class(g.minus_one()));
    let _ = writeln!(text, "F2-basis: {}", if basis.is_empty() { "(empty)".into() } else { basis.join(" ") });
    Ok(Outcome {
        passed: true,
        json: envelope("square-classes", true, body),
        text,
    })
}

fn need_ring(ring: Option<&str>, target: &str) -> Result<RingSpec, GwError> {
    let text = ring.ok_or_else(|| GwError::Precondition(format!("verify {target} requires --ring")))?;
    RingSpec::parse(text)
}

fn trial_outcome(name: &str, spec: RingSpec, seed: u64, r: TrialReport) -> Outcome {
    let passed = r.passed();
    let body = json!({
        "target": name,
        "ring": spec.to_string(),
        "seed": seed.to_string(),
        "trials": r.trials,
        "failures": r.failures.len(),
        "counterexample": r.failures.first(),
    });
    let mut text = format!(
        "{name} on {spec}: {} trials, {} failures (seed {seed})\n",
        r.trials,
        r.failures.len()
    );
    if let Some(c) = r.failures.first() {
        let _ = writeln!(text, "counterexample: {c}");
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Outcome {
        passed,
        json: envelope("verify", passed, body),
        text,
    }
}

pub fn verify(cfg: &Config, target: VerifyTarget, ring: Option<&str>, trials: Option<usize>) -> Result<Outcome, GwError> {
    match target {
        VerifyTarget::OrthogonalGroups => {
            let mut sizes = Vec::new();
            let mut text = String::new();
            let mut phi = Value::Null;
            let mut passed = true;
            for n in 2..=4 {
                let g = orthogonal_group(n)?;
                sizes.push(g.order());
                let _ = writeln!(
                    text,
                    "O_{n}(F2): {} elements ({} permutations) in GL_{n}(F2) of order {}",
                    g.order(),
                    g.permutation_count,
                    g.gl_order
                );
                if let Some(c) = g.phi_checks {
                    let _ = writeln!(
                        text,
                        "  permutations x {{I, Phi}}: {}\n  Phi^2 = I: {}\n  Phi commutes with permutations: {}",
                        c.decomposes, c.involution, c.commutes
                    );
                    passed &= c.all();
                    phi = json!({"decomposes": c.decomposes, "involution": c.involution, "commutes": c.commutes});
                }
            }
            passed &= sizes == [2, 6, 48];
            text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            let body = json!({"target": "orthogonal-groups", "sizes": sizes, "phi": phi});
            Ok(Outcome {
                passed,
                json: envelope("verify", passed, body),
                text,
            })
        }
        VerifyTarget::LemmaOdd => {
            let spec = need_ring(ring, "lemma-odd")?;
            let r = lemma_trials(spec, trials.unwrap_or(1000), cfg.seed)?;
            Ok(trial_outcome("lemma-odd", spec, cfg.seed, r))
        }
        VerifyTarget::Factorization => {
            let spec = need_ring(ring, "factorization")?;
            let r = factorization_trials(spec, trials.unwrap_or(500), cfg.seed, 4)?;
            Ok(trial_outcome("factorization", spec, cfg.seed, r))
        }
        VerifyTarget::Relations => {
            let spec = need_ring(ring, "relations")?;
            let r = ring_for(cfg, spec)?;
            let report = oracle_relation_check(r.presentation(), DEFAULT_VISITED_CAP)?;
            let passed = report.passed();
            let witnesses: Vec<Value> = report
                .witnesses
                .iter()
                .map(|w| {
                    json!({
                        "provenance": w.provenance.describe(&spec),
                        "relation": w.relation.coords(),
                        "lhs": w.lhs.iter().map(|&x| spec.format(x)).collect::<Vec<_>>(),
                        "rhs": w.rhs.iter().map(|&x| spec.format(x)).collect::<Vec<_>>(),
                        "method": w.method.label(),
                        "witness": w.witness.to_text_rows(),
                        "residue_orthogonal": w.residue_orthogonal,
                    })
                })
                .collect();
            let mut text = format!("relations on {spec}: {} checked\n", report.witnesses.len());
            for w in &report.witnesses {
                let _ = writeln!(
                    text,
                    "  {}: diag({}) ~ diag({}) via {} [{}]",
                    w.provenance.describe(&spec),
                    w.lhs.iter().map(|&x| spec.format(x)).collect::<Vec<_>>().join(", "),
                    w.rhs.iter().map(|&x| spec.format(x)).collect::<Vec<_>>().join(", "),
                    w.witness,
                    w.method.label()
                );
            }
            for f in &report.failures {
                let _ = writeln!(text, "  FAILED {f}");
            }
            text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            let body = json!({
                "target": "relations",
                "ring": spec.to_string(),
                "checked": report.witnesses.len(),
                "failures": report.failures,
                "witnesses": witnesses,
            });
            Ok(Outcome {
                passed,
                json: envelope("verify", passed, body),
                text,
            })
        }
        VerifyTarget::PfisterVanishing => {
            let spec = need_ring(ring, "pfister-vanishing")?;
            let r = ring_for(cfg, spec)?;
            let g = r.gw();
            let classes = g.classes();
            let mut nonzero = Vec::new();
            let mut pairs = 0;
            for a in 1..classes.num_classes() {
                for b in a..classes.num_classes() {
                    pairs += 1;
                    let x = g.pfister2(a, b)?;
                    if !x.is_zero() {
                        nonzero.push((classes.format_class(a), classes.format_class(b), x));
                    }
                }
            }
            let passed = nonzero.is_empty();
            let mut text = format!("2-fold Pfister forms on {spec}: {pairs} checked, {} nonzero\n", nonzero.len());
            for (a, b, x) in nonzero.iter().take(1) {
                let _ = writeln!(text, "counterexample: <<{a}, {b}>> = {}", combination(g, x));
            }
            text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            let body = json!({
                "target": "pfister-vanishing",
                "ring": spec.to_string(),
                "pairs": pairs,
                "nonzero": nonzero
                    .iter()
                    .map(|(a, b, x)| json!({"a": a, "b": b, "value": bigs(x.coords())}))
                    .collect::<Vec<_>>(),
            });
            Ok(Outcome {
                passed,
                json: envelope("verify", passed, body),
                text,
            })
        }
        VerifyTarget::Symmetrisation => {
            let spec = need_ring(ring, "symmetrisation")?;
            let r = ring_for(cfg, spec)?;
            let s = r.symmetrisation()?;
            let quotient = r.symmetrisation_cokernel()?;

            // Independent route: cokernel of the raw class-coordinate matrix.
            let classes = r.gw().classes();
            let k = classes.num_classes();
            let mut rows: Vec<Vec<BigInt>> = r
                .presentation()
                .relations()
                .iter()
                .map(|v| v.coords().iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let mut hyp = vec![BigInt::from(0); k];
            hyp[0] += 1;
            hyp[classes.minus_one()] += 1;
            rows.push(hyp);
            let mut sym = vec![BigInt::from(0); k];
            sym[0] += 3;
            sym[classes.class_of(spec.reduce(3))] -= 1;
            rows.push(sym);
            let (raw_torsion, raw_free) = cokernel(k, &rows);

            let passed = raw_torsion == quotient.invariant_factors() && raw_free == quotient.free_rank();
            let text = format!(
                "W({spec}) = {}\n3<1> - <3> = {} = {}\ncokernel: {}\nraw cokernel agrees: {}\n{}\n",
                r.witt().describe(),
                tuple(s.coords()),
                combination(r.witt(), &s),
                quotient.describe(),
                passed,
                if passed { "PASS" } else { "FAIL" }
            );
            let body = json!({
                "target": "symmetrisation",
                "ring": spec.to_string(),
                "witt": r.witt().describe(),
                "element": bigs(s.coords()),
                "cokernel": quotient.describe(),
                "cokernel_invariant_factors": bigs(&quotient.invariant_factors()),
                "cokernel_free_rank": quotient.free_rank(),
            });
            Ok(Outcome {
                passed,
                json: envelope("verify", passed, body),
                text,
            })
        }
    }
}

pub fn oracle(cfg: &Config, ring: &str, max_rank: usize) -> Result<Outcome, GwError> {
    let spec = RingSpec::parse(ring)?;
    let cap = cfg.cap.map(|c| c.min(u64::MAX as u128) as u64).unwrap_or(DEFAULT_CLASSIFY_CAP);
    let r = ring_for(
        &Config {
            seed: cfg.seed,
            cap: None,
            exact: cfg.exact,
        },
        spec,
    )?;
    let report = oracle_agreement(r.gw(), max_rank, cap)?;
    let passed = report.passed();
    let mut text = format!("oracle on {spec} up to rank {max_rank}\n");
    let mut ranks = Vec::new();
    for a in &report.ranks {
        let _ = writeln!(
            text,
            "  rank {}: {} unimodular of {} matrices, {} classes; {} diagonal forms, {} pairs, {} mismatches",
            a.rank,
            a.unimodular,
            a.matrices,
            a.classes,
            a.diagonal_forms,
            a.pairs,
            a.mismatches.len()
        );
        if let Some(m) = a.mismatches.first() {
            let f = |v: &[u64]| v.iter().map(|&x| spec.format(x)).collect::<Vec<_>>().join(", ");
            let _ = writeln!(
                text,
                "    counterexample: diag({}) vs diag({}): congruent {}, equal in GW {}",
                f(&m.left),
                f(&m.right),
                m.congruent,
                m.equal_in_gw
            );
        }
        ranks.push(json!({
            "rank": a.rank,
            "matrices": a.matrices,
            "unimodular": a.unimodular,
            "classes": a.classes,
            "diagonal_forms": a.diagonal_forms,
            "pairs": a.pairs,
            "mismatches": a.mismatches.iter().map(|m| json!({
                "left": m.left.iter().map(|&x| spec.format(x)).collect::<Vec<_>>(),
                "right": m.right.iter().map(|&x| spec.format(x)).collect::<Vec<_>>(),
                "congruent": m.congruent,
                "equal_in_gw": m.equal_in_gw,
            })).collect::<Vec<_>>(),
        }));
    }
    text.push_str(if passed { "match\n" } else { "mismatch\n" });
    let body = json!({"ring": spec.to_string(), "max_rank": max_rank, "ranks": ranks, "match": passed});
    Ok(Outcome {
        passed,
        json: envelope("oracle", passed, body),
        text,
    })
}

pub fn tower(cfg: &Config, family: &str, from: u32, to: u32) -> Result<Outcome, GwError> {
    let family: Family = family.parse()?;
    let steps = tower_check(family, from, to, &options(cfg))?;
    if cfg.exact && steps.iter().any(|s| s.sampled) {
        return Err(GwError::CapExceeded {
            needed: 0,
            cap: options(cfg).cap,
        });
    }
    let passed = steps.iter().all(|s| s.map.kernel_matches_generators);
    let mut text = String::new();
    let mut rows = Vec::new();
    for s in &steps {
        let m = &s.map;
        let _ = writeln!(
            text,
            "{} -> {}: {} -> {}  {}  kernel {}  kernel spanned by <a><<x>>: {}",
            s.source,
            s.target,
            s.source_group,
            s.target_group,
            if m.is_isomorphism() { "iso" } else { "not iso" },
            m.describe_kernel(),
            if m.kernel_matches_generators { "yes" } else { "NO" }
        );
        rows.push(json!({
            "source": s.source.to_string(),
            "target": s.target.to_string(),
            "source_group": s.source_group,
            "target_group": s.target_group,
            "isomorphism": m.is_isomorphism(),
            "surjective": m.surjective,
            "kernel": m.describe_kernel(),
            "kernel_torsion": bigs(&m.kernel_torsion),
            "kernel_free_rank": m.kernel_free_rank,
            "kernel_generators": m.kernel_generators.iter().map(|g| bigs(g.coords())).collect::<Vec<_>>(),
            "kernel_matches_generators": m.kernel_matches_generators,
            "matrix": m.matrix.iter().map(|r| bigs(r)).collect::<Vec<_>>(),
            "sampled": s.sampled,
        }));
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    let body = json!({"family": family.to_string(), "from": from, "to": to, "steps": rows});
    Ok(Outcome {
        passed,
        json: envelope("tower", passed, body),
        text,
    })
}
