//! The per-subcommand check suites.

use pcm_core::fixedpoint::{check_nonexpansive, check_pair_condition, find_common_fixed_point, verify_fixed_point};
use pcm_core::pcm_space::check_cone_metric_axioms;
use pcm_core::scalar::linspace;
use pcm_core::{
    AxiomCheck, Carrier, CheckBuilder, ConvexStructure, Error, KernelFamily, Neighborhood, PcmSpace, Status, Witness,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{SpaceConfig, StructureKind};

pub struct Context {
    pub config: SpaceConfig,
    pub space: PcmSpace<f64>,
    pub tol: f64,
    pub seed: u64,
}

impl Context {
    pub fn new(config: SpaceConfig, tol: Option<f64>, seed: u64) -> Result<Self, Error> {
        let space = config.space()?;
        let tol = tol.unwrap_or(config.grids.tolerance);
        Ok(Context {
            config,
            space,
            tol,
            seed,
        })
    }

    fn samples(&self) -> Vec<f64> {
        self.space.samples()
    }

    /// Carrier samples followed by seeded random carrier points.
    fn probes(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut probes = self.samples();
        for _ in 0..self.config.grids.random_probes {
            let p = match &self.space.carrier {
                Carrier::Interval { lo, hi, .. } => rng.gen_range(*lo..=*hi),
                Carrier::Naturals { max } => rng.gen_range(1..=*max) as f64,
                Carrier::Points(ps) => ps[rng.gen_range(0..ps.len())],
            };
            probes.push(p);
        }
        probes
    }
}

/// Folds several checks of one axiom into a single entry.
fn merge(id: &str, checks: Vec<AxiomCheck>) -> AxiomCheck {
    let worst_fail = checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .fold(None::<&AxiomCheck>, |acc, c| match acc {
            Some(a) if a.margin <= c.margin => Some(a),
            _ => Some(c),
        });
    let first_degenerate = checks.iter().find(|c| c.status == Status::Degenerate);
    let (status, witness, margin) = match (worst_fail, first_degenerate) {
        (Some(f), _) => (Status::Fail, f.witness.clone(), f.margin),
        (None, d) => {
            let margin = checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
            let margin = if margin.is_finite() { margin } else { 0.0 };
            match d {
                Some(d) => (Status::Degenerate, d.witness.clone(), margin),
                None => (Status::Pass, None, margin),
            }
        }
    };
    AxiomCheck {
        axiom_id: id.to_string(),
        status,
        witness,
        margin,
        checked: checks.iter().map(|c| c.checked).sum(),
        degenerate: checks.iter().map(|c| c.degenerate).sum(),
        note: checks.iter().find_map(|c| c.note.clone()),
    }
}

fn renamed(mut c: AxiomCheck, id: &str) -> AxiomCheck {
    c.axiom_id = id.to_string();
    c
}

pub fn check_axioms(cx: &Context) -> Result<Vec<AxiomCheck>, Error> {
    let ts = cx.config.t_values();
    let samples = cx.samples();
    let mut out = Vec::new();
    out.extend(cx.space.tnorm.check_axioms(&linspace(0.0, 1.0, 11))?.checks);
    out.extend(cx.space.cone.check_cone_axioms(&ts, &[0.0, 0.5, 1.0, 2.0])?.checks);
    if let KernelFamily::FromConeMetric(metric) = cx.space.kernel.family {
        out.extend(check_cone_metric_axioms(metric, &samples)?.checks);
    }
    out.extend(cx.space.check_pcm_axioms(&samples, &ts, cx.tol)?.checks);
    Ok(out)
}

pub fn diameter(cx: &Context) -> Result<Vec<AxiomCheck>, Error> {
    let ts = cx.config.t_values();
    let samples = cx.samples();
    let lambdas = &cx.config.grids.lambda_values;
    let resolution = cx.config.grids.resolution;
    let mut out = Vec::new();

    let profile = cx.space.diameter_profile(&samples, &ts, resolution)?;
    let values: Vec<f64> = profile.values.iter().map(|(_, d)| *d).collect();
    let monotone = profile.is_nondecreasing(&cx.space.cone);
    let in_range = values.iter().all(|d| (0.0..=1.0).contains(d));
    let shape = if profile.is_bounded(cx.tol) {
        "bounded on the grid"
    } else if profile.is_semi_bounded(cx.tol) {
        "semi-bounded on the grid"
    } else {
        "zero on the grid"
    };
    out.push(
        AxiomCheck::outcome(
            "diameter-profile",
            monotone && in_range,
            profile.overall,
            Some(Witness::scalars(&values)),
        )
        .with_note(shape),
    );

    out.push(match cx.space.is_fc_bounded(&samples, &ts, lambdas)? {
        Some((eps, lambda)) => AxiomCheck::outcome(
            "fc-bounded",
            true,
            lambda,
            Some(Witness::default().push_vector(&eps).push_scalar(lambda)),
        ),
        None => degenerate("fc-bounded", "no (eps, lambda) on the grid bounds the sample set"),
    });

    out.push(match cx.space.find_nondiametral(&samples, &ts, resolution, 1e-9)? {
        Some(nd) => AxiomCheck::outcome(
            "nondiametral-point",
            true,
            nd.margin,
            Some(Witness::scalars(&[nd.x]).push_vector(&nd.t0).push_scalar(nd.margin)),
        ),
        None => degenerate("nondiametral-point", "every sampled point is diametral"),
    });

    let centers = cx.space.totally_bounded_cover(&samples, &ts[0], lambdas[0])?;
    out.push(
        AxiomCheck::outcome("totally-bounded-cover", !centers.is_empty(), centers.len() as f64, Some(Witness::scalars(&centers)))
            .with_note("centers of a greedy cover at the first t and lambda"),
    );
    Ok(out)
}

fn degenerate(id: &str, note: &str) -> AxiomCheck {
    AxiomCheck {
        axiom_id: id.to_string(),
        status: Status::Degenerate,
        witness: None,
        margin: 0.0,
        checked: 1,
        degenerate: 1,
        note: Some(note.to_string()),
    }
}

pub fn hausdorff(cx: &Context) -> Result<Vec<AxiomCheck>, Error> {
    let ts = cx.config.t_values();
    let samples = cx.samples();
    let probes = cx.probes();
    let lambdas = &cx.config.grids.lambda_values;
    let s = &cx.space;

    let mut sep = CheckBuilder::new("hausdorff-separation");
    for (i, &p) in samples.iter().enumerate() {
        for &q in &samples[i + 1..] {
            let w = match s.hausdorff_witness(p, q, &ts[0]) {
                Ok(w) => w,
                Err(Error::WitnessNotFound(_)) => {
                    sep.record(-1.0, false, || Witness::scalars(&[p, q]));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let half = w.eps.scale(0.5)?;
            for &r in &probes {
                // r lies outside at least one ball iff F ≤ λ1 for that centre
                let slack = (w.lambda1 - s.eval_kernel(p, r, &half)?).max(w.lambda1 - s.eval_kernel(q, r, &half)?);
                sep.record(slack, slack >= 0.0, || Witness::scalars(&[p, q, r]));
            }
        }
    }

    let mut basis = CheckBuilder::new("first-countability");
    let mut mono = CheckBuilder::new("neighborhood-monotonicity");
    for &x in &samples {
        for eps in &ts {
            for &lambda in lambdas {
                let nb = Neighborhood::local_basis(x, eps, lambda)?;
                let big = Neighborhood::open(x, eps.clone(), lambda);
                for &q in &probes {
                    let ok = !s.member(&nb, q)? || s.member(&big, q)?;
                    basis.record(0.0, ok, || Witness::scalars(&[x, lambda, q]).push_vector(eps));
                }
            }
        }
        for e1 in &ts {
            for e2 in ts.iter().filter(|e2| s.cone.order(e1, e2).map_or(false, |o| o.is_leq())) {
                for &l1 in lambdas {
                    for &l2 in lambdas.iter().filter(|l2| **l2 >= l1) {
                        let ok = s.neighborhood_monotone_check(x, e1, l1, e2, l2, &probes)?;
                        mono.record(0.0, ok, || {
                            Witness::scalars(&[x]).push_vector(e1).push_scalar(l1).push_vector(e2).push_scalar(l2)
                        });
                    }
                }
            }
        }
    }
    Ok(vec![sep.finish(), basis.finish(), mono.finish()])
}

pub fn convexity(cx: &Context) -> Result<Vec<AxiomCheck>, Error> {
    if cx.config.structure != StructureKind::Affine {
        return Err(Error::Unsupported("the config declares no convex structure".into()));
    }
    let ts = cx.config.t_values();
    let samples = cx.samples();
    let mus = &cx.config.grids.mu_values;
    let lambdas = &cx.config.grids.lambda_values;
    let s = &cx.space;
    let cs = ConvexStructure::Affine;
    let (lo, hi) = s.carrier.bounds().expect("validated interval carrier");

    let mut law_mus = vec![0.0, 1.0];
    law_mus.extend(mus.iter().copied());
    let mut out = cs.check_laws(&samples, &law_mus)?.checks;
    out.extend(cs.check_g1(s, &samples, mus, &ts)?.checks);
    out.extend(cs.check_g3(s, &samples, mus, &ts)?.checks);
    out.extend(
        cs.check_strict_convexity(s, &samples, mus, &ts, &linspace(lo, hi, 101), cx.tol)?
            .checks,
    );
    let center = samples[samples.len() / 2];
    let mut balls = Vec::new();
    for eps in &ts {
        for &lambda in lambdas {
            balls.extend(
                cs.closed_ball_convexity_check(s, center, eps, lambda, &samples, &law_mus)?
                    .checks,
            );
        }
    }
    out.push(merge("closed-ball-convexity", balls));
    Ok(out)
}

pub fn fixed_point(cx: &Context) -> Result<Vec<AxiomCheck>, Error> {
    let Some((f, g)) = cx.config.maps() else {
        return Err(Error::Unsupported("the config declares no self-maps".into()));
    };
    let ts = cx.config.t_values();
    let samples: Vec<f64> = cx.samples().into_iter().filter(|x| f.contains(*x)).collect();
    let s = &cx.space;
    let mut out = Vec::new();
    out.push(renamed(check_nonexpansive(s, &f, &samples, &ts)?.checks.remove(0), "nonexpansive-f"));
    out.push(renamed(check_nonexpansive(s, &g, &samples, &ts)?.checks.remove(0), "nonexpansive-g"));
    out.extend(check_pair_condition(s, &f, &g, &samples, &ts)?.checks);

    let cfg = cx.config.fixed_point_config();
    out.push(match find_common_fixed_point(&f, &g, &cfg) {
        Ok(r) => {
            let verified = verify_fixed_point(&f, &g, r.point, cfg.tol)?;
            AxiomCheck::outcome(
                "common-fixed-point",
                verified,
                cfg.tol - r.residual_f.max(r.residual_g),
                Some(Witness::scalars(&[r.point, r.residual_f, r.residual_g])),
            )
            .with_note(format!("method {} after {} iterations", r.method.name(), r.iterations))
        }
        Err(Error::NotConverged { best, residual }) => AxiomCheck::outcome(
            "common-fixed-point",
            false,
            cfg.tol - residual,
            Some(Witness::scalars(&[best, residual])),
        )
        .with_note("no stage reached the tolerance"),
        Err(e) => return Err(e),
    });
    Ok(out)
}

pub fn full_suite(cx: &Context) -> Result<Vec<AxiomCheck>, Error> {
    let mut out = check_axioms(cx)?;
    out.extend(diameter(cx)?);
    out.extend(hausdorff(cx)?);
    if cx.config.structure == StructureKind::Affine {
        out.extend(convexity(cx)?);
    }
    if cx.config.maps.is_some() {
        out.extend(fixed_point(cx)?);
    }
    Ok(out)
}
