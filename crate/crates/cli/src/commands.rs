//! One function per subcommand. Each returns a [`Section`] whose `result`
//! holds only values determined by the arguments (no timings, no host data).

use std::path::Path;

use dp_hlog_core::incidence::{expected_conic_count, expected_line_count, line_pairing, orbit};
use dp_hlog_core::rep_theory::{d5_characters, d5_decompose, d5_labelled, projection_report};
use dp_hlog_core::wedge_kernel::{
    kernel_signs_with, ordering_sign, replay as replay_certificate, stretch_r8, KernelOptions, OrderingChoice,
};
use dp_hlog_core::weyl::{enumerate_group, group_order, stabilizer_order};
use dp_hlog_core::{d5_table, DivisorClass, Error as CoreError, HlogCertificate, Incidence};
use dp_hlog_hyperlog::model::{
    abel_model, random_parameters, symbolic_identity, symbolic_sum, DP4Data, PlaneModel,
};
use dp_hlog_hyperlog::numeric::{shuffle_consistency, verify_identity_numeric, NumericOptions};
use dp_hlog_hyperlog::poly::Rational;
use dp_hlog_hyperlog::quadrature::QuadratureOptions;
use dp_hlog_hyperlog::words::{random_shuffle_laws, verify_asym_shuffle_identities, ShuffleLawCheck};
use dp_hlog_hyperlog::HyperlogError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{CliError, Command, Family, RunConfig, Section};

type CliResult<T> = std::result::Result<T, CliError>;

fn core_family(e: &CoreError, family: Family) -> Family {
    match e {
        CoreError::UnsupportedRank(..) | CoreError::GroupTooLarge(..) => Family::Usage,
        _ => family,
    }
}

fn from_core(family: Family) -> impl Fn(CoreError) -> CliError {
    move |e| CliError::new(core_family(&e, family), e.to_string())
}

fn from_hyperlog(family: Family) -> impl Fn(HyperlogError) -> CliError {
    move |e| {
        let f = match &e {
            HyperlogError::Core(c) => core_family(c, family),
            HyperlogError::NonGeneric(_) => Family::Usage,
            _ => family,
        };
        CliError::new(f, e.to_string())
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

pub fn dispatch(config: &RunConfig) -> CliResult<Section> {
    let seed = config.seed;
    match &config.command {
        Command::Enumerate { rank } => enumerate(*rank),
        Command::Group { rank, count_only, orbit } => group(*rank, *count_only, orbit.as_deref()),
        Command::Certify { rank, stretch, budget, stability_seeds } => {
            certify(*rank, *stretch, *budget, seed, *stability_seeds)
        }
        Command::Replay { certificate } => replay(certificate),
        Command::Characters { rank, d5_full } => characters(*rank, *d5_full),
        Command::Symbols { check_asym, check_shuffle, check_dp4, shuffle_pairs, dp4_instances, trials, gamma, pi } => {
            let none = !(*check_asym || *check_shuffle || *check_dp4);
            let parameters = parameter_pair(gamma.as_deref(), pi.as_deref())?;
            symbols(&SymbolsPlan {
                asym: none || *check_asym,
                shuffle: none || *check_shuffle,
                dp4: none || *check_dp4,
                shuffle_pairs: *shuffle_pairs,
                dp4_instances: *dp4_instances,
                trials: *trials,
                parameters,
                seed,
            })
        }
        Command::Numeric { rank, gamma, pi, samples, tol, shuffle_pairs } => {
            let parameters = parameter_pair(gamma.as_deref(), pi.as_deref())?;
            numeric(*rank, parameters, *samples, *tol, *shuffle_pairs, seed)
        }
        Command::All { rank } => all(*rank, seed),
    }
}

pub fn enumerate(rank: usize) -> CliResult<Section> {
    let inc = Incidence::new(rank).map_err(from_core(Family::Enumeration))?;
    let lt = &inc.lines;
    let mut covered = vec![false; lt.len()];
    let mut fiber_counts = true;
    let mut transverse = true;
    let mut sums = true;
    let mut conics = Vec::with_capacity(inc.conics.len());
    for c in &inc.conics {
        fiber_counts &= c.fibers.len() == rank - 1;
        let cls = c.cls.to_i64();
        for &(i, j) in &c.fibers {
            covered[i] = true;
            covered[j] = true;
            transverse &= line_pairing(lt, i, j) == 1;
            sums &= lt.coeffs(i).iter().zip(lt.coeffs(j)).map(|(a, b)| a + b).eq(cls.iter().copied());
        }
        conics.push(json!({ "class": cls, "fibers": c.fibers }));
    }
    let every_line_in_a_fiber = covered.iter().all(|&c| c);
    let counts_match = lt.len() == expected_line_count(rank) && inc.conics.len() == expected_conic_count(rank);
    let pass = counts_match && fiber_counts && transverse && sums && every_line_in_a_fiber;
    let lines: Vec<&[i64]> = (0..lt.len()).map(|i| lt.coeffs(i)).collect();
    Ok(Section {
        family: Family::Enumeration,
        pass,
        result: json!({
            "rank": rank,
            "line_count": lt.len(),
            "expected_line_count": expected_line_count(rank),
            "conic_count": inc.conics.len(),
            "expected_conic_count": expected_conic_count(rank),
            "checks": {
                "every_fibration_has_r_minus_1_fibers": fiber_counts,
                "fibers_are_transverse_line_pairs": transverse,
                "fibers_sum_to_the_conic_class": sums,
                "every_line_in_a_fiber": every_line_in_a_fiber,
            },
            "lines": lines,
            "conics": conics,
        }),
    })
}

pub fn group(rank: usize, count_only: bool, orbit_of: Option<&str>) -> CliResult<Section> {
    let inc = Incidence::new(rank).map_err(from_core(Family::Enumeration))?;
    let target = orbit_of
        .map(|s| {
            let coeffs: Vec<i64> =
                serde_json::from_str(s).map_err(|e| CliError::usage(format!("--orbit expects a JSON array: {e}")))?;
            if coeffs.len() != rank + 1 {
                return Err(CliError::usage(format!("--orbit needs {} coefficients", rank + 1)));
            }
            DivisorClass::from_i64(&coeffs).map_err(from_core(Family::Usage))
        })
        .transpose()?;
    let group = enumerate_group(rank, &inc.lines).map_err(from_core(Family::Enumeration))?;
    let expected = group_order(rank);
    let mut pass = group.order() as u64 == expected;
    let mut result = json!({ "rank": rank, "order": group.order(), "expected_order": expected });
    if !count_only {
        let generators: Vec<Value> = group
            .generators
            .iter()
            .map(|g| {
                let fixed = g.perm.iter().enumerate().filter(|(i, &p)| *i == p as usize).count();
                let involution = g.compose(g).is_identity();
                pass &= involution && g.sign == -1;
                json!({ "perm": g.perm, "sign": g.sign, "fixed_lines": fixed, "involution": involution })
            })
            .collect();
        let sign_sum: i64 = group.perms().map(|(_, s)| s as i64).sum();
        pass &= sign_sum == 0;
        result["generators"] = json!(generators);
        result["even_elements"] = json!((group.order() as i64 + sign_sum) / 2);
    }
    if let Some(cls) = target {
        let line = inc.lines.index_of(&cls).is_some();
        let conic = inc.conic_index_of(&cls).is_some();
        if !line && !conic {
            return Err(CliError::usage(format!("{cls} is neither a line nor a conic class")));
        }
        let orbit_size = orbit(&inc.lattice, &cls, &inc.lattice.roots).map_err(from_core(Family::Enumeration))?.len();
        let stabilizer = stabilizer_order(&group, &inc, &cls).map_err(from_core(Family::Enumeration))?;
        let orbit_stabilizer = orbit_size as u64 * stabilizer == group.order() as u64;
        pass &= orbit_stabilizer;
        result["orbit"] = json!({
            "class": cls.to_i64(),
            "kind": if line { "line" } else { "conic" },
            "orbit_size": orbit_size,
            "stabilizer_order": stabilizer,
            "orbit_stabilizer": orbit_stabilizer,
        });
    }
    Ok(Section { family: Family::Enumeration, pass, result })
}

/// `signs` re-expressed in the orderings of `reference`, up to one global
/// sign, agree with the reference signs.
fn agrees_with(cert: &HlogCertificate, reference: &HlogCertificate) -> bool {
    let translated: Vec<i8> = cert
        .signs()
        .iter()
        .zip(cert.body.orderings.iter().zip(&reference.body.orderings))
        .map(|(&s, (from, to))| s * ordering_sign(from, to))
        .collect();
    let lambda = translated[0] * reference.signs()[0];
    translated.iter().zip(reference.signs()).all(|(&a, &b)| a == lambda * b)
}

pub fn certify(rank: usize, stretch: bool, budget: usize, seed: u64, stability_seeds: u64) -> CliResult<Section> {
    if rank == 8 && !stretch {
        return Err(CliError::usage("rank 8 is only attempted with --stretch"));
    }
    if rank == 8 {
        return Ok(match stretch_r8(budget) {
            Ok(cert) => Section {
                family: Family::Kernel,
                pass: true,
                result: json!({
                    "rank": 8,
                    "stretch": true,
                    "outcome": "certified",
                    "budget": budget,
                    "kernel_dimension": cert.body.kernel_dimension,
                    "certificate": to_value(&cert),
                }),
            },
            Err(e) => Section {
                family: Family::Kernel,
                pass: false,
                result: json!({
                    "rank": 8,
                    "stretch": true,
                    "outcome": "failed",
                    "budget": budget,
                    "reason": e.to_string(),
                }),
            },
        });
    }
    let inc = Incidence::new(rank).map_err(from_core(Family::Kernel))?;
    let cert = kernel_signs_with(&inc, &KernelOptions::default()).map_err(from_core(Family::Kernel))?;
    let all_unit = cert.signs().iter().all(|s| s.abs() == 1);
    let mut pass = cert.body.kernel_dimension == 1 && all_unit;
    let mut stability = Vec::new();
    for s in seed..seed + stability_seeds {
        let opts = KernelOptions { ordering: OrderingChoice::Randomized(s), ..KernelOptions::default() };
        let entry = match kernel_signs_with(&inc, &opts) {
            Ok(c) => {
                let agrees = agrees_with(&c, &cert);
                pass &= agrees;
                json!({ "seed": s, "kernel_dimension": c.body.kernel_dimension, "all_unit": true, "agrees": agrees })
            }
            Err(e) => {
                pass = false;
                json!({ "seed": s, "error": e.to_string() })
            }
        };
        stability.push(entry);
    }
    Ok(Section {
        family: Family::Kernel,
        pass,
        result: json!({
            "rank": rank,
            "conics": inc.conics.len(),
            "kernel_dimension": cert.body.kernel_dimension,
            "all_unit": all_unit,
            "plus_count": cert.signs().iter().filter(|&&s| s == 1).count(),
            "stability": stability,
            "certificate": to_value(&cert),
        }),
    })
}

pub fn replay(path: &Path) -> CliResult<Section> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(Family::Io, format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::new(Family::Kernel, format!("not JSON: {e}")))?;
    let body = value.get("result").and_then(|r| r.get("certificate")).cloned().unwrap_or(value);
    let cert: HlogCertificate =
        serde_json::from_value(body).map_err(|e| CliError::new(Family::Kernel, format!("not a certificate: {e}")))?;
    let report = replay_certificate(&cert).map_err(from_core(Family::Kernel))?;
    Ok(Section {
        family: Family::Kernel,
        pass: report.hash_matches && report.signed_sum_vanishes,
        result: to_value(&report),
    })
}

pub fn characters(rank: usize, d5_full: bool) -> CliResult<Section> {
    if !(4..=7).contains(&rank) {
        return Err(CliError::new(
            Family::Usage,
            format!("{}", CoreError::UnsupportedRank(rank, "4..=7")),
        ));
    }
    if d5_full && rank != 5 {
        return Err(CliError::usage("--d5-full applies to rank 5"));
    }
    let inc = Incidence::new(rank).map_err(from_core(Family::Character))?;
    let group = enumerate_group(rank, &inc.lines).map_err(from_core(Family::Character))?;
    let report = projection_report(&group, &inc).map_err(from_core(Family::Character))?;
    let mut pass = report.matches_expected();
    let mut result = json!({ "projections": to_value(&report), "matches_expected": pass });
    if d5_full {
        let (d5, d5_pass) = d5_section(&inc)?;
        pass &= d5_pass;
        result["d5"] = d5;
    }
    Ok(Section { family: Family::Character, pass, result })
}

fn d5_section(inc: &Incidence) -> CliResult<(Value, bool)> {
    let ch = d5_characters(inc).map_err(from_core(Family::Character))?;
    let chi = d5_decompose(&ch.chi).map_err(from_core(Family::Character))?;
    let wedge3 = d5_decompose(&ch.wedge3).map_err(from_core(Family::Character))?;
    let conic = d5_decompose(&ch.conic).map_err(from_core(Family::Character))?;
    let mut chi_labels: Vec<String> = d5_labelled(&chi).into_iter().filter(|(_, m)| *m == 1).map(|(l, _)| l).collect();
    chi_labels.sort();
    let mut expected_labels: Vec<String> = d5_table::CHI5_CONSTITUENTS.iter().map(|s| s.to_string()).collect();
    expected_labels.sort();
    let checks = json!({
        "chi": ch.chi == d5_table::CHI5_REFERENCE,
        "wedge3": ch.wedge3 == d5_table::WEDGE3_REFERENCE,
        "chi_decomposition": chi.iter().sum::<i64>() == 3 && chi_labels == expected_labels,
        "wedge3_multiplicities": wedge3 == d5_table::WEDGE3_MULTIPLICITIES_REFERENCE,
    });
    let pass = checks.as_object().expect("object").values().all(|v| v == &json!(true));
    let labelled = |m: &[i64; 18]| -> Value {
        d5_labelled(m).into_iter().map(|(l, k)| json!({ "character": l, "multiplicity": k })).collect()
    };
    Ok((
        json!({
            "classes": d5_table::CLASS_LABELS,
            "chi": ch.chi,
            "wedge3": ch.wedge3,
            "conic": ch.conic,
            "chi_constituents": labelled(&chi),
            "wedge3_multiplicities": wedge3,
            "conic_constituents": labelled(&conic),
            "checks": checks,
        }),
        pass,
    ))
}

fn parse_rational(flag: &str, s: &str) -> CliResult<Rational> {
    s.trim().parse::<Rational>().map_err(|_| CliError::usage(format!("{flag} expects p/q, got {s:?}")))
}

fn parameter_pair(gamma: Option<&str>, pi: Option<&str>) -> CliResult<Option<(Rational, Rational)>> {
    match (gamma, pi) {
        (Some(g), Some(p)) => Ok(Some((parse_rational("--gamma", g)?, parse_rational("--pi", p)?))),
        (None, None) => Ok(None),
        _ => Err(CliError::usage("--gamma and --pi go together")),
    }
}

fn certified_signs(model: &PlaneModel) -> CliResult<Vec<i8>> {
    let inc = Incidence::new(model.r).map_err(from_core(Family::Kernel))?;
    let cert = kernel_signs_with(&inc, &KernelOptions::default()).map_err(from_core(Family::Kernel))?;
    model.translate_signs(&inc, &cert).map_err(from_hyperlog(Family::Symbolic))
}

pub struct SymbolsPlan {
    pub asym: bool,
    pub shuffle: bool,
    pub dp4: bool,
    pub shuffle_pairs: usize,
    pub dp4_instances: usize,
    pub trials: usize,
    pub parameters: Option<(Rational, Rational)>,
    pub seed: u64,
}

fn dp4_instance<R: rand::Rng>(gamma: Rational, pi: Rational, trials: usize, rng: &mut R) -> CliResult<(Value, bool)> {
    let data = DP4Data::new(gamma, pi).map_err(from_hyperlog(Family::Symbolic))?;
    let mut out = json!({ "gamma": data.gamma.to_string(), "pi": data.pi.to_string() });
    let residue = data.model.residue_check(&data.residues, trials, rng);
    let residue_ok = residue.is_ok();
    out["residue_check"] = match residue {
        Ok(r) => json!({ "pass": true, "report": to_value(&r) }),
        Err(e) => json!({ "pass": false, "error": e.to_string() }),
    };
    let derived = data.model.derive_residues().map_err(from_hyperlog(Family::Symbolic))?;
    let derived_ok = derived == data.residues;
    out["derived_residues_match"] = json!(derived_ok);
    let signs = certified_signs(&data.model)?;
    out["signs"] = json!(signs);
    let vanishes = match symbolic_identity(&data.residues, &signs) {
        Ok(r) => r.vanishes,
        Err(HyperlogError::SymbolicIdentityViolation(n)) => {
            out["nonzero_coefficients"] = json!(n);
            false
        }
        Err(e) => return Err(from_hyperlog(Family::Symbolic)(e)),
    };
    out["vanishes"] = json!(vanishes);
    let modified = |f: &dyn Fn(&mut Vec<i8>, usize)| -> Vec<usize> {
        (0..signs.len())
            .map(|i| {
                let mut s = signs.clone();
                f(&mut s, i);
                symbolic_sum(&data.residues, &s).len()
            })
            .collect()
    };
    let drop_one = modified(&|s, i| s[i] = 0);
    let flip_one = modified(&|s, i| s[i] = -s[i]);
    let non_vacuous = drop_one.iter().chain(&flip_one).all(|&n| n > 0);
    out["drop_one_nonzero_coefficients"] = json!(drop_one);
    out["flip_one_nonzero_coefficients"] = json!(flip_one);
    let pass = residue_ok && derived_ok && vanishes && non_vacuous;
    out["pass"] = json!(pass);
    Ok((out, pass))
}

pub fn symbols(plan: &SymbolsPlan) -> CliResult<Section> {
    let mut pass = true;
    let mut result = json!({});
    if plan.asym {
        let report = verify_asym_shuffle_identities();
        pass &= report.all_hold();
        result["asym_identities"] = json!({ "pass": report.all_hold(), "checks": to_value(&report.checks) });
    }
    if plan.shuffle {
        let checks = random_shuffle_laws(plan.shuffle_pairs, plan.seed);
        let failures: Vec<&ShuffleLawCheck> = checks.iter().filter(|c| !c.all_hold()).collect();
        pass &= failures.is_empty();
        result["shuffle_laws"] = json!({
            "pass": failures.is_empty(),
            "pairs": checks.len(),
            "failures": to_value(&failures),
        });
    }
    if plan.dp4 {
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        let parameters: Vec<(Rational, Rational)> = match &plan.parameters {
            Some(p) => vec![p.clone()],
            None => (0..plan.dp4_instances).map(|_| random_parameters(&mut rng)).collect(),
        };
        let mut instances = Vec::with_capacity(parameters.len());
        for (g, p) in parameters {
            let (v, ok) = dp4_instance(g, p, plan.trials, &mut rng)?;
            pass &= ok;
            instances.push(v);
        }
        result["dp4"] = json!({ "trials": plan.trials, "instances": instances });
    }
    Ok(Section { family: Family::Symbolic, pass, result })
}

pub fn numeric(
    rank: usize,
    parameters: Option<(Rational, Rational)>,
    samples: Option<usize>,
    tol: Option<f64>,
    shuffle_pairs: usize,
    seed: u64,
) -> CliResult<Section> {
    let (model, default_samples, default_tol, gamma_pi) = match rank {
        4 => {
            if parameters.is_some() {
                return Err(CliError::usage("--gamma and --pi apply to rank 5"));
            }
            (abel_model(), 20, 1e-8, None)
        }
        5 => {
            let (g, p) = parameters.unwrap_or_else(|| random_parameters(&mut ChaCha8Rng::seed_from_u64(seed)));
            let data = DP4Data::new(g, p).map_err(from_hyperlog(Family::Numeric))?;
            (data.model, 10, 1e-6, Some((data.gamma.to_string(), data.pi.to_string())))
        }
        _ => {
            return Err(CliError::usage(format!(
                "numeric evaluation needs explicit first integrals and supports ranks 4 and 5, not {rank}; \
                 ranks 6 and 7 are certified by `certify`"
            )))
        }
    };
    let signs = certified_signs(&model)?;
    let opts = NumericOptions {
        samples: samples.unwrap_or(default_samples),
        tol: tol.unwrap_or(default_tol),
        seed,
        ..NumericOptions::default()
    };
    let mut report = verify_identity_numeric(&model, &signs, &opts).map_err(from_hyperlog(Family::Numeric))?;
    if let Some((g, p)) = gamma_pi {
        report.gamma = Some(g);
        report.pi = Some(p);
    }
    let shuffle =
        shuffle_consistency(shuffle_pairs, seed, &QuadratureOptions::default()).map_err(from_hyperlog(Family::Numeric))?;
    let pass = report.pass && shuffle.pass;
    Ok(Section {
        family: Family::Numeric,
        pass,
        result: json!({ "identity": to_value(&report), "shuffle": to_value(&shuffle) }),
    })
}

pub fn all(rank: usize, seed: u64) -> CliResult<Section> {
    if !(3..=8).contains(&rank) {
        return Err(CliError::usage(CoreError::UnsupportedRank(rank, "3..=8").to_string()));
    }
    let mut routes: Vec<(&str, CliResult<Section>)> = vec![("enumerate", enumerate(rank))];
    if rank <= 7 {
        routes.push(("group", group(rank, false, None)));
    }
    if (4..=7).contains(&rank) {
        routes.push(("certify", certify(rank, false, 0, seed, 0)));
        routes.push(("characters", characters(rank, rank == 5)));
    }
    routes.push((
        "symbols",
        symbols(&SymbolsPlan {
            asym: true,
            shuffle: true,
            dp4: rank == 5,
            shuffle_pairs: 100,
            dp4_instances: 5,
            trials: 20,
            parameters: None,
            seed,
        }),
    ));
    if rank == 4 || rank == 5 {
        routes.push(("numeric", numeric(rank, None, None, None, 50, seed)));
    }
    let mut failing = None;
    let mut summary = serde_json::Map::new();
    for (name, outcome) in routes {
        let entry = match outcome {
            Ok(s) => {
                if !s.pass && failing.is_none() {
                    failing = Some(s.family);
                }
                json!({ "pass": s.pass, "result": s.result })
            }
            Err(e) => {
                if failing.is_none() {
                    failing = Some(e.family);
                }
                json!({ "pass": false, "error": { "family": e.family.name(), "message": e.message } })
            }
        };
        summary.insert(name.to_string(), entry);
    }
    Ok(Section {
        family: failing.unwrap_or(Family::Usage),
        pass: failing.is_none(),
        result: json!({ "rank": rank, "routes": summary }),
    })
}
