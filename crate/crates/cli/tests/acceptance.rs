//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use morphic_cli::corpus;
use morphic_core::automatic::{decide_automatic, ClassRoute};
use morphic_core::oracle::{aligned_occurrences, generate_prefix, EvidenceConfig};
use morphic_core::pure::decide_pure_nonerasing;
use morphic_core::sample::{random_coding, random_prolongable, random_uniform, rng};
use morphic_core::suites::{self, SuiteReport};
use morphic_core::{Coding, Letter, Morphism, Side, Verdict, Witness, Word};

const SEED: u64 = 1;

struct Outcome {
    passed: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn suite(reports: &[SuiteReport], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let mut passed = reports.iter().all(|r| r.passed());
    let mut parts: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{} {}/{} (skipped {})",
                r.name, r.agreed, r.total, r.skipped
            )
        })
        .collect();
    for r in reports {
        for f in r.failures.iter().take(5) {
            parts.push(format!("failure: {f}"));
        }
    }
    if let Some(limit) = limit {
        passed &= elapsed < limit;
        parts.push(format!(
            "{:.2}s (limit {}s)",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ));
    } else {
        parts.push(format!("{:.2}s", elapsed.as_secs_f64()));
    }
    Outcome {
        passed,
        detail: parts.join("; "),
    }
}

fn criterion_1() -> Outcome {
    let inner = Morphism::from_chars("012", &["01", "120", "2"]).unwrap();
    let left = Morphism::from_chars("012", &["01", "210", "2"]).unwrap();
    let (a, ta) = timed(|| decide_pure_nonerasing(&inner, Letter(0)));
    let (b, tb) = timed(|| decide_pure_nonerasing(&left, Letter(0)));
    let expected = Witness::TailCycle {
        side: Side::Left,
        cycle: vec![Letter(1)],
        from: Letter(1),
        to: Letter(1),
        label: Word::single(Letter(2)),
    };
    let ok_a = a
        .as_ref()
        .is_ok_and(|d| d.verdict == Verdict::AlmostPeriodic);
    let ok_b = b.as_ref().is_ok_and(|d| {
        d.verdict == Verdict::NotAlmostPeriodic && d.witness.as_ref() == Some(&expected)
    });
    let limit = Duration::from_secs(1);
    Outcome {
        passed: ok_a && ok_b && ta < limit && tb < limit,
        detail: format!(
            "inner-bounded {} in {:.3}ms; left-tail {} witness {:?} in {:.3}ms",
            a.map_or("error".to_string(), |d| d.verdict.to_string()),
            ta.as_secs_f64() * 1e3,
            b.as_ref()
                .map_or("error".to_string(), |d| d.verdict.to_string()),
            b.as_ref().ok().and_then(|d| d.witness.clone()),
            tb.as_secs_f64() * 1e3,
        ),
    }
}

fn criterion_2() -> Outcome {
    let cfg = EvidenceConfig::new(10_000, 100_000, 3);
    let (reports, t) = timed(|| {
        vec![
            suites::binary_vs_pure(4),
            suites::binary_erasing_vs_oracle(4, &cfg),
        ]
    });
    suite(&reports, t, Some(Duration::from_secs(10)))
}

fn criterion_3() -> Outcome {
    let (r, t) = timed(|| suites::uniform_vs_pure(3, 2));
    suite(&[r], t, Some(Duration::from_secs(60)))
}

fn criterion_4() -> Outcome {
    let (r, t) = timed(|| suites::pair_graph_semantics(SEED, 200, 4, 3, 2));
    suite(&[r], t, None)
}

fn criterion_5() -> Outcome {
    let (r, t) = timed(|| suites::relation_periodicity(SEED, 200, 4, 3));
    suite(&[r], t, None)
}

fn criterion_6() -> Outcome {
    let cfg = EvidenceConfig::new(100_000, 1_000_000, 3).with_slack(0);
    let (r, t) = timed(|| suites::decider_vs_oracle(SEED, 500, 4, 3, &cfg));
    suite(&[r], t, None)
}

fn criterion_7() -> Outcome {
    let (r, t) = timed(|| suites::matrix_identity(SEED, 100, 4, 3, 5));
    suite(&[r], t, None)
}

const SCALING_INSTANCES: usize = 5;
/// Each batch is repeated until it has run this long, so the ratio is not
/// dominated by timer resolution.
const SCALING_MIN_BATCH: Duration = Duration::from_millis(50);

struct Batch {
    /// Mean wall time of one pass over the batch.
    mean: Duration,
    /// Slowest single call seen.
    slowest: Duration,
    ok: bool,
    via_pairs: usize,
}

fn measure(mut call: impl FnMut(usize) -> (bool, bool)) -> Batch {
    let mut rounds = 0u32;
    let mut total = Duration::ZERO;
    let mut slowest = Duration::ZERO;
    let mut ok = true;
    let mut via_pairs = 0;
    while total < SCALING_MIN_BATCH {
        for i in 0..SCALING_INSTANCES {
            let ((good, pairs), t) = timed(|| call(i));
            ok &= good;
            if rounds == 0 {
                via_pairs += pairs as usize;
            }
            total += t;
            slowest = slowest.max(t);
        }
        rounds += 1;
    }
    Batch {
        mean: total / rounds,
        slowest,
        ok,
        via_pairs,
    }
}

fn batches(n: usize, k: usize) -> (Batch, Batch) {
    let mut r = rng(SEED ^ n as u64);
    let pure: Vec<Morphism> = (0..SCALING_INSTANCES)
        .map(|_| random_prolongable(&mut r, n, k))
        .collect();
    let automatic: Vec<(Morphism, Coding)> = (0..SCALING_INSTANCES)
        .map(|_| {
            let m = random_uniform(&mut r, n, k);
            let h = random_coding(&mut r, &m, 2);
            (m, h)
        })
        .collect();
    let p = measure(|i| (decide_pure_nonerasing(&pure[i], Letter(0)).is_ok(), false));
    let a = measure(|i| {
        let (m, h) = &automatic[i];
        match decide_automatic(m, h, Letter(0)) {
            Ok(d) => (
                true,
                d.automatic
                    .is_some_and(|a| matches!(a.route, ClassRoute::PairGraph { .. })),
            ),
            Err(_) => (false, false),
        }
    });
    (p, a)
}

fn criterion_8() -> Outcome {
    let k = 10;
    let (p25, a25) = batches(25, k);
    let (p50, a50) = batches(50, k);
    let limit = Duration::from_secs(5);
    let ratio = |small: &Batch, large: &Batch| large.mean.as_secs_f64() / small.mean.as_secs_f64();
    let (rp, ra) = (ratio(&p25, &p50), ratio(&a25, &a50));
    let ms = |d: Duration| d.as_secs_f64() * 1e3;
    Outcome {
        passed: p25.ok
            && p50.ok
            && a25.ok
            && a50.ok
            && p50.slowest < limit
            && a50.slowest < limit
            && rp < 16.0
            && ra < 16.0,
        detail: format!(
            "{SCALING_INSTANCES} instances per batch, k={k}: pure n=50 slowest {:.3}ms, \
             batch n=25->50 {:.3}ms->{:.3}ms ({rp:.1}x); automatic n=50 slowest {:.3}ms, \
             batch n=25->50 {:.3}ms->{:.3}ms ({ra:.1}x); pair-graph fallback on {} of {} automatic instances",
            ms(p50.slowest),
            ms(p25.mean),
            ms(p50.mean),
            ms(a50.slowest),
            ms(a25.mean),
            ms(a50.mean),
            a25.via_pairs + a50.via_pairs,
            2 * SCALING_INSTANCES,
        ),
    }
}

fn aligned_max_gap(w: &[Letter], u: &[Letter], k: usize) -> Option<usize> {
    let pos = aligned_occurrences(w, u, k).ok()?;
    pos.windows(2).map(|p| p[1] - p[0]).max()
}

fn criterion_9() -> Outcome {
    let mut passed = true;
    let mut checked = Vec::new();
    let mut skipped = Vec::new();
    for e in corpus::bundled() {
        if e.doc.expect != Some(Verdict::AlmostPeriodic) {
            continue;
        }
        let m = e.doc.morphism();
        let Some(k) = m.uniform_length() else {
            skipped.push(e.name().to_string());
            continue;
        };
        let s = e.doc.start_letter(&m);
        let h = e.doc.coding(&m);
        let w = match generate_prefix(&m, s, h.as_ref(), 100_000) {
            Ok(w) => w,
            Err(err) => {
                passed = false;
                checked.push(format!("{} error {err}", e.name()));
                continue;
            }
        };
        let mut gaps = Vec::new();
        for level in 1..=3u32 {
            let block = m.power_apply(&[s], level as usize).unwrap();
            let u = h.as_ref().map_or(block.clone(), |h| h.apply(&block));
            let step = k.pow(level);
            let small = aligned_max_gap(&w[..10_000], &u, step);
            let large = aligned_max_gap(&w, &u, step);
            passed &= matches!((small, large), (Some(a), Some(b)) if b <= a);
            gaps.push(format!(
                "m={level}: {}->{}",
                small.map_or("none".into(), |g| g.to_string()),
                large.map_or("none".into(), |g| g.to_string())
            ));
        }
        checked.push(format!("{} [{}]", e.name(), gaps.join(", ")));
    }
    passed &= !checked.is_empty();
    Outcome {
        passed,
        detail: format!(
            "{}; non-uniform AP entries skipped: {}",
            checked.join("; "),
            skipped.join(" ")
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 reference morphisms", criterion_1),
        ("2 binary criterion", criterion_2),
        ("3 uniform cross-decider", criterion_3),
        ("4 pair-graph semantics", criterion_4),
        ("5 relation periodicity", criterion_5),
        ("6 oracle agreement", criterion_6),
        ("7 matrix identity", criterion_7),
        ("8 scaling", criterion_8),
        ("9 aligned occurrences", criterion_9),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let o = run();
        all &= o.passed;
        println!(
            "{} criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
