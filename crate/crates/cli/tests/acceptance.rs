//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use intres::approx::default_max_depth;
use intres::artrans::{dual_onto, tau, tau_inverse};
use intres::ladder::interval_approximation_delta;
use intres::testkit::{oracle_intervals, oracle_submodule, perturbed, plant, presented, rng, PlantedModule};
use intres::{
    enumerate_intervals, euler_profile, interval_dimension, interval_resolution, verify_resolution, Field,
    IntervalPoset, IntervalResolution, PersistenceModule, Poset, VertexSet,
};
use intres_cli::{cmd_compress, cmd_intervals, cmd_intgldim, load_module, RunConfig};
use rand::Rng;
use serde_json::{json, Value};

struct Outcome {
    ok: bool,
    detail: String,
}

/// Every resolution built by criteria 1 to 4, checked together by criterion 6.
#[derive(Default)]
struct Soundness {
    checked: usize,
    violations: Vec<String>,
}

impl Soundness {
    fn record(&mut self, what: &str, res: &IntervalResolution, ip: &IntervalPoset) {
        self.checked += 1;
        let r = verify_resolution(res, ip);
        if !r.ok() {
            self.violations.push(format!("{what}: {:?}", r.violations));
        }
    }
}

fn grid(m: usize, n: usize) -> Arc<Poset> {
    Arc::new(Poset::grid(m, n).unwrap())
}

fn resolve(m: &Arc<PersistenceModule>, ip: &IntervalPoset) -> IntervalResolution {
    interval_resolution(m, ip, default_max_depth(ip)).unwrap()
}

const TABLE: [((usize, usize), usize, u64); 9] = [
    ((2, 2), 0, 60),
    ((2, 3), 1, 60),
    ((2, 4), 2, 60),
    ((2, 5), 2, 60),
    ((2, 6), 2, 60),
    ((3, 3), 2, 60),
    ((3, 4), 3, 1800),
    ((3, 5), 4, 1800),
    ((4, 4), 4, 1800),
];

fn criterion_1_and_5(sound: &mut Soundness) -> (Outcome, Outcome) {
    let cfg = RunConfig::new(2).unwrap();
    let f = cfg.field;
    let (mut ok1, mut ok5) = (true, true);
    let (mut d1, mut d5) = (Vec::new(), Vec::new());
    for ((m, n), want, budget) in TABLE {
        let start = Instant::now();
        let report = cmd_intgldim(m, n, &cfg);
        let took = start.elapsed();
        match report {
            Ok(r) => {
                let got = r.json["intgldim"].as_u64().unwrap() as usize;
                let (a, b) = (&r.json["tau_max"], &r.json["tau_inverse_max"]);
                ok1 &= got == want && took <= Duration::from_secs(budget);
                ok5 &= a == b;
                d1.push(format!("{m}x{n}={got} ({:.2}s)", took.as_secs_f64()));
                d5.push(format!("{m}x{n}:{a}/{b}"));
            }
            Err(e) => {
                ok1 = false;
                ok5 = false;
                d1.push(format!("{m}x{n}: {e}"));
                d5.push(format!("{m}x{n}: {e}"));
            }
        }
        // the resolutions behind the table, for the soundness suite
        let p = grid(m, n);
        let ip = enumerate_intervals(&p);
        let op = Arc::new(p.opposite());
        let ip_op = enumerate_intervals(&op);
        for iv in ip.intervals() {
            let v = Arc::new(PersistenceModule::from_interval(p.clone(), f, iv));
            let t = Arc::new(tau(&v).unwrap());
            sound.record(&format!("tau V_I on {m}x{n}"), &resolve(&t, &ip), &ip);
            let d = Arc::new(dual_onto(&tau_inverse(&v).unwrap(), &op).unwrap());
            sound.record(&format!("D tau^- V_I on {m}x{n}"), &resolve(&d, &ip_op), &ip_op);
        }
    }
    (
        Outcome { ok: ok1, detail: d1.join(", ") },
        Outcome { ok: ok5, detail: d5.join(", ") },
    )
}

fn criterion_2(sound: &mut Soundness) -> Outcome {
    let start = Instant::now();
    let path = format!("{}/../core/tests/fixtures/ladder_g42.json", env!("CARGO_MANIFEST_DIR"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let cfg = RunConfig::new(2).unwrap();
    let m = load_module(&v, &cfg).unwrap();
    let at = |rows: Value| cmd_compress(&m, &json!({"staircase": rows})).unwrap().json["multiplicity"].clone();
    let ci = at(json!([[1, 2, 3], [2, 1, 3]]));
    let cj = at(json!([[1, 2, 4], [2, 2, 3]]));
    let took = start.elapsed();
    let ip = enumerate_intervals(m.poset());
    sound.record("worked ladder example", &resolve(&m, &ip), &ip);
    Outcome {
        ok: ci == json!(0) && cj == json!(1) && took < Duration::from_secs(1),
        detail: format!("c(I)={ci}, c(J)={cj} ({:.3}s)", took.as_secs_f64()),
    }
}

/// Samples for criteria 3 and 4: mixed generators over G(n,2), n = 2..=5,
/// plus planted modules over G(n,2), n = 2..=6.
fn ladder_samples() -> (Vec<Arc<PersistenceModule>>, Vec<(Arc<IntervalPoset>, PlantedModule)>) {
    let ips: Vec<Arc<IntervalPoset>> = (2..=6).map(|n| Arc::new(enumerate_intervals(&grid(n, 2)))).collect();
    let mut mixed = Vec::new();
    for s in 0..240u64 {
        let ip = &ips[(s % 4) as usize];
        let p = ip.poset();
        let f = Field::new([2, 3, 5][(s % 3) as usize]).unwrap();
        mixed.push(Arc::new(match (s / 4) % 3 {
            0 => plant(ip, f, 6, s).module.as_ref().clone(),
            1 => perturbed(p, f, 3, s),
            _ => presented(p, f, 8, s),
        }));
    }
    let planted = (0..250u64)
        .map(|s| {
            let ip = ips[(s % 5) as usize].clone();
            let pm = plant(&ip, Field::new([2, 3][(s % 2) as usize]).unwrap(), 7, 10_000 + s);
            (ip, pm)
        })
        .collect();
    (mixed, planted)
}

fn criterion_3(mixed: &[Arc<PersistenceModule>], sound: &mut Soundness, euler_ok: &mut usize) -> Outcome {
    let mut bad = 0;
    for (k, m) in mixed.iter().enumerate() {
        let ip = enumerate_intervals(m.poset());
        let res = resolve(m, &ip);
        sound.record(&format!("ladder sample {k}"), &res, &ip);
        let euler = euler_profile(&res, ip.len());
        let prof = interval_approximation_delta(m, &ip).unwrap();
        let sums = (0..ip.len()).all(|i| {
            let s: i64 = (0..ip.len()).filter(|&j| ip.leq(i, j)).map(|j| euler[j]).sum();
            s == prof.c[i] as i64
        });
        bad += usize::from(!sums);
        *euler_ok += usize::from(prof.delta == euler);
    }
    Outcome {
        ok: bad == 0 && mixed.len() >= 200,
        detail: format!("{} modules, {bad} mismatches", mixed.len()),
    }
}

fn criterion_4(
    planted: &[(Arc<IntervalPoset>, PlantedModule)],
    mixed_total: usize,
    mixed_euler_ok: usize,
    sound: &mut Soundness,
) -> Outcome {
    let (mut planted_bad, mut euler_bad) = (0, mixed_total - mixed_euler_ok);
    for (ip, pm) in planted {
        let res = resolve(&pm.module, ip);
        sound.record(&format!("planted seed {}", pm.seed), &res, ip);
        let prof = interval_approximation_delta(&pm.module, ip).unwrap();
        let want: Vec<i64> = pm.multiplicities.iter().map(|&k| k as i64).collect();
        planted_bad += usize::from(prof.delta != want);
        euler_bad += usize::from(prof.delta != euler_profile(&res, ip.len()));
    }
    Outcome {
        ok: planted_bad == 0 && euler_bad == 0 && planted.len() >= 200,
        detail: format!(
            "{} planted ({planted_bad} wrong), {} total vs euler profile ({euler_bad} wrong)",
            planted.len(),
            planted.len() + mixed_total
        ),
    }
}

fn criterion_7() -> Outcome {
    let shapes = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2), (3, 4), (4, 3), (4, 4)];
    let ips: Vec<IntervalPoset> = shapes.iter().map(|&(m, n)| enumerate_intervals(&grid(m, n))).collect();
    let mut nonzero = 0;
    for s in 0..500u64 {
        let mut r = rng(s);
        let ip = &ips[r.gen_range(0..ips.len())];
        let members = ip.get(r.gen_range(0..ip.len())).members();
        let f = Field::new([2, 3, 5][r.gen_range(0..3)]).unwrap();
        let sub = Arc::new(oracle_submodule(ip.poset(), f, members, s).unwrap());
        nonzero += usize::from(interval_dimension(&sub, ip).unwrap() != 0);
    }
    Outcome {
        ok: nonzero == 0,
        detail: format!("500 submodules, {nonzero} with positive interval dimension"),
    }
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=12 {
        for n in 1..=12 / m {
            let p = grid(m, n);
            let fast: Vec<VertexSet> = enumerate_intervals(&p).intervals().iter().map(|iv| iv.members()).collect();
            if fast != oracle_intervals(&p).unwrap() {
                bad.push(format!("{m}x{n}"));
            }
        }
    }
    let square = cmd_intervals(&grid(2, 2)).json["count"].clone();
    let chains = (1..=12).all(|n| enumerate_intervals(&Arc::new(Poset::chain(n).unwrap())).len() == n * (n + 1) / 2);
    Outcome {
        ok: bad.is_empty() && square == json!(11) && chains,
        detail: format!("mismatched grids {bad:?}, 2x2 count {square}, chains ok {chains}"),
    }
}

#[test]
fn acceptance() {
    let mut sound = Soundness::default();
    let (c1, c5) = criterion_1_and_5(&mut sound);
    let c2 = criterion_2(&mut sound);
    let (mixed, planted) = ladder_samples();
    let mut mixed_euler_ok = 0;
    let c3 = criterion_3(&mixed, &mut sound, &mut mixed_euler_ok);
    let c4 = criterion_4(&planted, mixed.len(), mixed_euler_ok, &mut sound);
    let c6 = Outcome {
        ok: sound.violations.is_empty(),
        detail: format!(
            "{} resolutions, {} violations {:?}",
            sound.checked,
            sound.violations.len(),
            sound.violations.iter().take(3).collect::<Vec<_>>()
        ),
    };
    let c7 = criterion_7();
    let c8 = criterion_8();

    let all = [c1, c2, c3, c4, c5, c6, c7, c8];
    for (i, o) in all.iter().enumerate() {
        println!("criterion {}: {} {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<usize> = all.iter().enumerate().filter(|(_, o)| !o.ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
