//! Acceptance checks. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wiretap::optimizer::{
    grid_oracle, jam_objective, optimal_jamming, optimal_powers_jam, optimal_powers_sum,
    sum_objective, sum_threshold, tdma_optimal_alpha, CaseLabel, Objective, Refinement,
};
use wiretap::rates::{cm, cw, g, nonempty_subsets, PowerVector, UserSubset};
use wiretap::regions::{
    collective_region_at, delta_region, individual_region_at, outer_region_at,
    rate_split_collective, region_boundary_2d, sum_capacity_degraded, tdma_secrecy_sum,
    BoundaryKind, DeltaRateVector, RateVector, RegionKind, SplitOutcome,
};
use wiretap::scenario::{sweep, ScenarioConfig};
use wiretap::StandardChannel;

const ORACLE_RES: usize = 201;
const ORACLE_TOL: f64 = 1e-6;
const MIN_INSTANCES: usize = 500;
const MIN_PER_LABEL: usize = 50;
const MAX_INSTANCES: usize = 20_000;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> Verdict {
    let t = Instant::now();
    let v = f();
    let el = t.elapsed();
    match limit {
        Some(l) if el > l => verdict(false, format!("{} (took {el:.2?}, limit {l:?})", v.detail)),
        _ => verdict(v.pass, format!("{} [{el:.2?}]", v.detail)),
    }
}

fn chan(h: &[f64], pmax: &[f64]) -> StandardChannel {
    StandardChannel::new(h.to_vec(), pmax.to_vec()).unwrap()
}

fn pv(p: &[f64]) -> PowerVector {
    PowerVector::new(p.to_vec()).unwrap()
}

/// Uniform on (0, 20].
fn power(rng: &mut StdRng) -> f64 {
    20.0 - rng.gen_range(0.0..20.0)
}

fn degraded_instances(seed: u64, n: usize) -> Vec<(f64, [f64; 2])> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.gen_range(0.0..1.0), [power(&mut rng), power(&mut rng)]))
        .collect()
}

fn c1_sum_capacity() -> Verdict {
    let mut worst = 0.0f64;
    for (h, p) in degraded_instances(1, 100) {
        let std = chan(&[h, h], &p);
        let p = pv(&p);
        let ach = collective_region_at(&std, &p).unwrap().rows[0].rhs;
        let out = outer_region_at(&std, &p, RegionKind::OuterCollective).unwrap().rows[0].rhs;
        let cap = sum_capacity_degraded(h, p.total()).unwrap();
        worst = worst.max((ach - out).abs()).max((ach - cap).abs());
    }
    verdict(worst <= 1e-12, format!("100 degraded instances, max deviation {worst:.2e}"))
}

fn c2_tdma() -> Verdict {
    let mut at_opt = 0.0f64;
    let mut excess = f64::NEG_INFINITY;
    for (h, p) in degraded_instances(2, 100) {
        let std = chan(&[h, h], &p);
        let p = pv(&p);
        let cap = sum_capacity_degraded(h, p.total()).unwrap();
        let a = tdma_optimal_alpha(&p).unwrap();
        let best = tdma_secrecy_sum(&std, &p, &a).unwrap();
        at_opt = at_opt.max((best - cap).abs());
        for i in 0..=1000 {
            let a1 = i as f64 / 1000.0;
            let s = tdma_secrecy_sum(&std, &p, &[a1, 1.0 - a1]).unwrap();
            excess = excess.max(s - best);
        }
    }
    verdict(
        at_opt <= 1e-9 && excess <= 1e-9,
        format!("|TDMA(α*) - capacity| max {at_opt:.2e}, grid excess max {excess:.2e}"),
    )
}

/// Random instance with gains in [0,3)² and limits in (0,20]², users ordered by gain.
fn opt_instance(rng: &mut StdRng) -> ([f64; 2], [f64; 2]) {
    let h = [rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)];
    let p = [power(rng), power(rng)];
    if h[0] <= h[1] {
        (h, p)
    } else {
        ([h[1], h[0]], [p[1], p[0]])
    }
}

fn labels_summary(counts: &BTreeMap<String, usize>) -> String {
    counts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn label_name(l: CaseLabel) -> String {
    serde_json::to_value(l).unwrap().as_str().unwrap().to_string()
}

fn enough(counts: &BTreeMap<String, usize>, labels: &[CaseLabel], n: usize) -> bool {
    n >= MIN_INSTANCES
        && labels
            .iter()
            .all(|l| counts.get(&label_name(*l)).copied().unwrap_or(0) >= MIN_PER_LABEL)
}

fn c3_sum_oracle() -> Verdict {
    let labels = [CaseLabel::BothTransmit, CaseLabel::OneTransmits, CaseLabel::None];
    let mut rng = StdRng::seed_from_u64(3);
    let mut counts = BTreeMap::new();
    let (mut n, mut worst) = (0, 0.0f64);
    while !enough(&counts, &labels, n) && n < MAX_INSTANCES {
        let (h, p) = opt_instance(&mut rng);
        let a = optimal_powers_sum(h, p).unwrap();
        let o = grid_oracle(Objective::Sum, h, p, ORACLE_RES, Refinement::default()).unwrap();
        worst = worst.max((a.achieved_rate - o.value).abs());
        *counts.entry(label_name(a.case_label)).or_insert(0) += 1;
        n += 1;
    }
    verdict(
        enough(&counts, &labels, n) && worst <= ORACLE_TOL,
        format!("{n} instances, max gap {worst:.2e}; {}", labels_summary(&counts)),
    )
}

/// 1-D maximisation of the jamming objective over `P2` at fixed `P1`:
/// fine grid, then golden-section search around the best grid point.
fn jam_line_search(h: [f64; 2], p1: f64, pmax2: f64) -> (f64, f64) {
    let f = |x: f64| jam_objective([p1, x], h);
    let n = 100_000;
    let step = pmax2 / n as f64;
    let i = (0..=n)
        .max_by(|&a, &b| f(a as f64 * step).total_cmp(&f(b as f64 * step)))
        .unwrap();
    let (mut lo, mut hi) = (((i as f64) - 1.0).max(0.0) * step, ((i + 1) as f64 * step).min(pmax2));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (x1, x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
        if f(x1) < f(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

fn c4_jam_oracle() -> Verdict {
    let labels = [
        CaseLabel::BothTransmit,
        CaseLabel::NoJam,
        CaseLabel::JamAtRoot,
        CaseLabel::JamAtMax,
        CaseLabel::None,
    ];
    let mut rng = StdRng::seed_from_u64(4);
    let mut counts = BTreeMap::new();
    let (mut n, mut worst_pure, mut worst_scheme) = (0, 0.0f64, 0.0f64);
    while !enough(&counts, &labels, n) && n < MAX_INSTANCES {
        let (h, p) = opt_instance(&mut rng);
        let jam_o = grid_oracle(Objective::Jam, h, p, ORACLE_RES, Refinement::default()).unwrap();
        let sum_o = grid_oracle(Objective::Sum, h, p, ORACLE_RES, Refinement::default()).unwrap();
        let pure = optimal_jamming(h, p).unwrap();
        worst_pure = worst_pure.max((pure.achieved_rate - jam_o.value).abs());
        let a = optimal_powers_jam(h, p).unwrap();
        worst_scheme = worst_scheme.max((a.achieved_rate - jam_o.value.max(sum_o.value)).abs());
        *counts.entry(label_name(a.case_label)).or_insert(0) += 1;
        n += 1;
    }

    let pinned = optimal_powers_jam([0.5, 2.0], [10.0, 10.0]).unwrap();
    let (x, v) = jam_line_search([0.5, 2.0], 10.0, 10.0);
    let exact = 0.5 * 2.25f64.log2();
    let pin_ok = (pinned.p[0] - 10.0).abs() <= 1e-9
        && (pinned.p[1] - 1.0).abs() <= 1e-9
        && (pinned.achieved_rate - v).abs() <= 1e-9
        && (pinned.achieved_rate - exact).abs() <= 1e-9
        && (x - 1.0).abs() <= 1e-6;
    verdict(
        enough(&counts, &labels, n) && worst_pure <= ORACLE_TOL && worst_scheme <= ORACLE_TOL && pin_ok,
        format!(
            "{n} instances, jam-only gap {worst_pure:.2e}, scheme gap {worst_scheme:.2e}; {}; \
             pinned p=({:.9},{:.9}) rate {:.9} vs 1-D oracle {v:.9} at P2={x:.6}",
            labels_summary(&counts),
            pinned.p[0],
            pinned.p[1],
            pinned.achieved_rate
        ),
    )
}

fn c5_continuity() -> Verdict {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (h1, p1, p2) = (rng.gen_range(0.0..1.0), power(&mut rng), power(&mut rng));
        let h = [h1, sum_threshold(h1, p1)];
        worst = worst.max((sum_objective([p1, p2], h) - sum_objective([p1, 0.0], h)).abs());
    }
    verdict(worst <= 1e-9, format!("50 threshold instances, max difference {worst:.2e}"))
}

fn c6_inclusions() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let (mut ind_hits, mut delta_hits, mut bad) = (0usize, 0usize, 0usize);
    for _ in 0..200 {
        let k = rng.gen_range(2..=3);
        let h: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..2.0)).collect();
        let pmax: Vec<f64> = (0..k).map(|_| power(&mut rng)).collect();
        let p: Vec<f64> = pmax.iter().map(|m| rng.gen_range(0.0..=*m)).collect();
        let std = chan(&h, &pmax);
        let p = pv(&p);
        let ind = individual_region_at(&std, &p).unwrap();
        let col = collective_region_at(&std, &p).unwrap();
        let scale = cm(&p, UserSubset::full(k));
        let (d_lo, d_hi) = {
            let a: f64 = rng.gen_range(0.05..1.0);
            let b: f64 = rng.gen_range(0.05..1.0);
            (a.min(b), a.max(b))
        };
        let lo = delta_region(&col, d_lo).unwrap();
        let hi = delta_region(&col, d_hi).unwrap();
        for _ in 0..50 {
            let secret: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..0.5) * scale / k as f64).collect();
            let open: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..0.5) * scale / k as f64).collect();
            let r = RateVector::new(secret, open).unwrap();
            if ind.membership(&r, 0.0).unwrap().inside {
                ind_hits += 1;
                if !col.membership(&r, 1e-12).unwrap().inside {
                    bad += 1;
                }
            }
            let total: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0) * scale / k as f64).collect();
            let t_hi = DeltaRateVector::new(total.clone(), d_hi).unwrap();
            let t_lo = DeltaRateVector::new(total, d_lo).unwrap();
            if hi.membership(&t_hi, 0.0).unwrap().inside {
                delta_hits += 1;
                if !lo.membership(&t_lo, 1e-12).unwrap().inside {
                    bad += 1;
                }
            }
        }
    }
    verdict(
        bad == 0 && ind_hits > 0 && delta_hits > 0,
        format!("200 instances: {ind_hits} individual and {delta_hits} δ' members tested, {bad} counterexamples"),
    )
}

fn c7_limits() -> Verdict {
    let near = sum_capacity_degraded(1e-6, 10.0).unwrap();
    let g10 = g(10.0).unwrap();
    let lim_ok = (near - g10).abs() <= 1e-4;

    let (delta, h) = (0.5, 0.5f64);
    let bound = -h.log2() / (2.0 * delta);
    let rhs_at = |total: f64| {
        let std = chan(&[h, h], &[total / 2.0, total / 2.0]);
        let set = collective_region_at(&std, &pv(&[total / 2.0, total / 2.0])).unwrap();
        delta_region(&set, delta).unwrap().rows[0].rhs
    };
    let big = rhs_at(1e6);
    let sweep: Vec<f64> = (0..10).map(|i| rhs_at(10f64.powf(i as f64 * 6.0 / 9.0))).collect();
    let monotone = sweep.windows(2).all(|w| w[1] >= w[0]);
    verdict(
        lim_ok && big <= bound && monotone,
        format!(
            "|C(h=1e-6,P=10) - g(10)| = {:.2e}; δ-RHS at P=1e6 = {big:.9} <= {bound}; monotone over 10 points: {monotone}",
            (near - g10).abs()
        ),
    )
}

fn c8_rate_split() -> Verdict {
    let mut rng = StdRng::seed_from_u64(8);
    let (mut points, mut attempts, mut failures, mut accepted_beyond) = (0, 0, 0, 0);
    let mut worst = 0.0f64;
    while points < 100 && attempts < 100_000 {
        attempts += 1;
        let k = rng.gen_range(2..=3);
        let h: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.5)).collect();
        let pmax: Vec<f64> = (0..k).map(|_| power(&mut rng)).collect();
        let std = chan(&h, &pmax);
        let p = pv(&pmax.iter().map(|m| rng.gen_range(0.0..=*m)).collect::<Vec<_>>());
        let col = collective_region_at(&std, &p).unwrap();
        let rhs = col.rows[0].rhs;
        if rhs <= 0.0 {
            continue;
        }
        let full = UserSubset::full(k);
        let w: Vec<f64> = (0..k).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
        let ws: f64 = w.iter().sum();
        let secret: Vec<f64> = w.iter().map(|x| rhs * x / ws).collect();
        let cw_k = cw(&p, &std.h, full);
        let open_total = rng.gen_range(0.0..1.0) * cw_k;
        let v: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
        let vs: f64 = v.iter().sum();
        let open: Vec<f64> = v.iter().map(|x| open_total * x / vs).collect();
        let r = RateVector::new(secret.clone(), open.clone()).unwrap();
        if !col.membership(&r, 0.0).unwrap().inside {
            continue;
        }
        points += 1;
        match rate_split_collective(&std, &p, &r).unwrap() {
            SplitOutcome::Witness(wit) => {
                let x = &wit.extra;
                let mut err = (full.sum(&secret) - rhs).abs();
                err = err.max((full.sum(&open) + full.sum(x) - cw_k).abs());
                for s in nonempty_subsets(k).unwrap() {
                    let lhs = s.sum(&secret) + s.sum(&open) + s.sum(x);
                    err = err.max(lhs - cm(&p, s));
                }
                err = err.max(-x.iter().copied().fold(f64::INFINITY, f64::min));
                worst = worst.max(err);
                if err > 1e-12 {
                    failures += 1;
                }
            }
            SplitOutcome::Infeasible { .. } => failures += 1,
        }
        let mut beyond = secret.clone();
        let j = rng.gen_range(0..k);
        beyond[j] += 1e-3;
        let r = RateVector::new(beyond, open).unwrap();
        if rate_split_collective(&std, &p, &r).unwrap().witness().is_some() {
            accepted_beyond += 1;
        }
    }
    verdict(
        points == 100 && failures == 0 && accepted_beyond == 0,
        format!(
            "{points} boundary points: {failures} without valid witness (max residual {worst:.2e}), \
             {accepted_beyond} points 1e-3 beyond accepted"
        ),
    )
}

fn c9_scenario() -> Verdict {
    let text = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/scenario_example.json"));
    let cfg = ScenarioConfig::from_json(text).unwrap();
    let res = sweep(&cfg).unwrap();
    let worse = res
        .records
        .iter()
        .filter(|r| r.sumrate_jam < r.sumrate_nojam - 1e-9)
        .count();
    let s = &res.summary;
    verdict(
        worse == 0 && s.zero_rate_cells_jam <= s.zero_rate_cells_nojam && res.records.len() == 10_000,
        format!(
            "{} cells, {worse} where jamming loses; zero-rate cells {} with jamming vs {} without",
            res.records.len(),
            s.zero_rate_cells_jam,
            s.zero_rate_cells_nojam
        ),
    )
}

fn c10_hull() -> Verdict {
    let std = chan(&[0.5, 0.5], &[2.0, 2.0]);
    let coarse = region_boundary_2d(&std, BoundaryKind::Collective, 1.0, 101, 2).unwrap();
    let fine = region_boundary_2d(&std, BoundaryKind::Collective, 1.0, 201, 2).unwrap();
    let (a, b) = (coarse.max_sum_vertex().unwrap(), fine.max_sum_vertex().unwrap());
    let shift = (a[0] - b[0]).hypot(a[1] - b[1]);
    let nested = coarse.vertices.iter().all(|v| fine.contains(*v, 1e-9));
    verdict(
        shift <= 1e-4 && nested,
        format!(
            "max-sum vertex ({:.6},{:.6}) -> ({:.6},{:.6}), shift {shift:.2e}; coarse hull inside fine: {nested}",
            a[0], a[1], b[0], b[1]
        ),
    )
}

fn main() {
    let secs = Duration::from_secs;
    let criteria: Vec<(&str, Option<Duration>, fn() -> Verdict)> = vec![
        ("degraded sum-capacity equality", Some(secs(1)), c1_sum_capacity),
        ("TDMA optimal shares", Some(secs(1)), c2_tdma),
        ("sum-rate allocation vs grid oracle", Some(secs(60)), c3_sum_oracle),
        ("jamming allocation vs grid oracle", Some(secs(60)), c4_jam_oracle),
        ("case-boundary continuity", None, c5_continuity),
        ("region inclusions", None, c6_inclusions),
        ("high-power and weak-eavesdropper limits", None, c7_limits),
        ("rate-split witnesses", None, c8_rate_split),
        ("mobile eavesdropper sweep", Some(secs(30)), c9_scenario),
        ("hull refinement stability", None, c10_hull),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let v = timed(limit, f);
        let tag = if v.pass { "PASS" } else { "FAIL" };
        if !v.pass {
            failed += 1;
        }
        println!("criterion {:>2} {tag}: {name}: {}", i + 1, v.detail);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
