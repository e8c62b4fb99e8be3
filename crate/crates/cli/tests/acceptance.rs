//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Pipelines run through the binary with a single worker thread, so the
//! runtime limits are checked in the least favourable configuration.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fuglede_core::constructions::data;
use fuglede_core::constructions::layered::{build_layered_tile, verify_layer_sum_identity, LayeredTileSpec};
use fuglede_core::spectral::{find_spectrum, SearchOutcome};
use fuglede_core::tiling::{enumerate_complements, fourier_tiling_condition, is_tiling_pair, CheckMode};
use fuglede_core::{Group, PointSet};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

struct Run {
    code: i32,
    stdout: String,
    elapsed: Duration,
}

fn lab(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fuglede-lab"))
        .args(args)
        .env("FUGLEDE_LAB_THREADS", "1")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        elapsed: start.elapsed(),
    }
}

fn reproduce(which: &str, dir: &Path) -> Result<(PathBuf, Value, Duration), String> {
    let path = dir.join(format!("{which}.json"));
    let run = lab(&["reproduce", which, "--output", path.to_str().unwrap()]);
    ensure(run.code == 0, format!("reproduce {which} exited {}", run.code))?;
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(v["schema_version"] == 1 && v["verdict"] == "accepted", format!("{which}: bad transcript header"))?;
    Ok((path, v["certificate"].clone(), run.elapsed))
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_i64).collect()).unwrap_or_default()
}

fn criterion_1(dir: &Path) -> Check {
    let (_, c, t) = reproduce("hadamard", dir)?;
    ensure(c["pairs_checked"] == 15, "15 row pairs")?;
    ensure(c["failures"].as_array().is_some_and(|f| f.is_empty()), "no failing row pair")?;
    ensure(t < Duration::from_secs(1), format!("runtime {t:?}"))?;
    Ok(format!("15 row pairs orthogonal over ζ8 in {t:.2?}"))
}

fn criterion_2(c: &Value, elapsed: Duration, t_rows: &[Vec<i64>]) -> Check {
    for d in ["decomposition_t1", "decomposition_t"] {
        ensure(c[d]["mismatches"].as_array().is_some_and(|m| m.is_empty()), format!("{d} has mismatches"))?;
    }
    ensure(c["spectrum_t1"] == true && c["spectrum_t"] == true, "L is a spectrum of T1 and T")?;
    let rows = c["p_matrix"]["complements"].as_array().ok_or("P complements")?;
    ensure(rows.len() == 18, "18 rows of P")?;
    for r in rows {
        let names = r.as_array().ok_or("names")?;
        ensure(!names.is_empty() && names.iter().all(|n| n == "C1" || n == "C2"), "P row tiles with C1 or C2")?;
    }
    ensure(c["p_matrix"]["congruent"] == true, "P ≡ K - K mod 8")?;
    ensure(c["p_matrix"]["rank_mod3"] == 3 && c["p_matrix"]["generators_rank_mod3"] == 3, "mod-3 rank")?;
    ensure(c["rows_covered"] == 18, "pairs reach all 18 difference rows")?;
    let pairs = c["pairs"].as_array().ok_or("pairs")?;
    let mut seen: Vec<(i64, i64)> = Vec::new();
    for p in pairs {
        let (i, j) = (p["i"].as_i64().unwrap_or(0), p["j"].as_i64().unwrap_or(0));
        seen.push((i, j));
        let (y, v, row) = (ints(&p["y"]["y"]), ints(&p["v"]), ints(&p["p_row"]));
        // y T ≡ p and 3y ≡ v (mod 24), recomputed here column by column
        for col in 0..row.len() {
            let dot: i64 = y.iter().zip(t_rows).map(|(a, r)| a * r[col]).sum();
            ensure((dot - row[col]).rem_euclid(24) == 0, format!("yT != p for ({i},{j})"))?;
        }
        ensure(y.iter().zip(&v).all(|(a, b)| (3 * a - b).rem_euclid(24) == 0), format!("3y != v for ({i},{j})"))?;
        ensure(p["surjective"] == true && p["injective"] == true, format!("phi for ({i},{j})"))?;
        ensure(p["complement_size"] == 2304 && p["audited"] == true, format!("pullback for ({i},{j})"))?;
        ensure(p["nonzero"] == true && p["fourier_value"] != "0", format!("value for ({i},{j})"))?;
    }
    seen.sort();
    let all: Vec<(i64, i64)> = (1..=6).flat_map(|i| (1..=6).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    ensure(seen == all, "every ordered pair of rows of L")?;
    let h = c["obstruction_order"].as_u64().ok_or("obstruction")?;
    ensure(c["spectrum_size"] == 6 && h == 512 && h % 6 != 0, "|L| = 6 does not divide 512")?;
    ensure(elapsed < Duration::from_secs(300), format!("runtime {elapsed:?}"))?;
    Ok(format!("30 ordered pairs, 18 rows, obstruction 6 ∤ 512, single thread {elapsed:.1?}"))
}

fn criterion_3(c: &Value) -> Check {
    let p = c["pairs"]
        .as_array()
        .and_then(|a| a.iter().find(|p| p["i"] == 3 && p["j"] == 1))
        .ok_or("no (3,1) record")?;
    ensure(ints(&p["y"]["y"]) == [9, 8, 0], "y = (9,8,0)")?;
    ensure(ints(&p["y"]["mod3"]) == [0, 2, 0], "mod-3 part (0,2,0)")?;
    ensure(ints(&p["y"]["mod8"]) == [1, 0, 0], "mod-8 part (1,0,0)")?;
    ensure(p["multiplier"] == 576 && ints(&p["rho_exponents"]) == [0, 3, 6, 9], "24²(ρ^0+ρ^3+ρ^6+ρ^9)")?;
    Ok(format!("y = (9,8,0), value {}", p["rho_form"].as_str().unwrap_or("?")))
}

fn criterion_4(c: &Value, elapsed: Duration) -> Check {
    ensure(c["u_size"] == 216 && c["u_difference_closed"] == true, "|U| = 216 and U - U = U")?;
    let mut perms: Vec<Vec<i64>> = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let mut v = vec![4; 4];
            v[a] = 2;
            v[b] = 2;
            perms.push(v);
        }
    }
    let mut u0: Vec<Vec<i64>> = c["u0"].as_array().ok_or("u0")?.iter().map(ints).collect();
    u0.sort();
    perms.sort();
    ensure(u0 == perms, "U0 = permutations of (2,2,4,4)")?;
    let p: Vec<Vec<i64>> = c["fact1_candidates"].as_array().ok_or("P")?.iter().map(ints).collect();
    ensure(p == [[3, 4, 4, 4], [4, 3, 4, 4], [4, 4, 3, 4], [4, 4, 4, 3]], "fact 1 candidates = P")?;
    let trees = c["fact2"].as_array().ok_or("fact2")?;
    ensure(trees.len() == 4, "four fact 2 trees")?;
    let mut largest = 0;
    for t in trees {
        let n = t["nodes"].as_u64().unwrap_or(u64::MAX);
        ensure(t["closed"] == true && n <= 100_000, "fact 2 tree closed within 10^5 nodes")?;
        largest = largest.max(n);
    }
    let f3 = c["fact3"].as_array().ok_or("fact3")?;
    ensure(f3.len() == 6 && f3.iter().all(|x| x["immediate_contradiction"] == true), "fact 3")?;
    ensure(c["inner_sums"] == 24 && c["inner_sums_vanish"] == true, "24 inner sums vanish")?;
    let h = c["duality"]["subgroup_order"].as_u64().ok_or("duality")?;
    ensure(h == 81 && h % 6 != 0, "81-element subgroup, 6 ∤ 81")?;
    ensure(c["corroborating_complements"].as_array().is_some_and(|a| a.len() == 3), "three complements accept U")?;
    ensure(elapsed < Duration::from_secs(600), format!("runtime {elapsed:?}"))?;
    Ok(format!("facts hold (largest tree {largest} nodes), 24 sums vanish, 6 ∤ 81, {elapsed:.1?}"))
}

fn criterion_5() -> Check {
    let mut rng = StdRng::seed_from_u64(0xacce);
    let (mut accepted, mut disagreements) = (0, 0);
    for _ in 0..1000 {
        let (t, tp) = oracle::random_pair(&mut rng, 144);
        let d = is_tiling_pair(&t, &tp, CheckMode::Fast).map_err(|e| e.to_string())?.is_accepted();
        let f = fourier_tiling_condition(&t, &tp).map_err(|e| e.to_string())?;
        disagreements += (d != f) as usize;
        ensure(d == oracle::tiles_by_counting(&t, &tp), "difference-set verdict disagrees with counting")?;
        accepted += d as usize;
    }
    ensure(disagreements == 0, format!("{disagreements} disagreements"))?;
    Ok(format!("1000 pairs ({accepted} tilings), 0 disagreements"))
}

fn criterion_6() -> Check {
    let mut tiles = 0;
    for n in 1..=12 {
        for t in oracle::cyclic_classes(n) {
            if n as usize % t.len() != 0 {
                continue;
            }
            let e = enumerate_complements(&t, usize::MAX).map_err(|e| e.to_string())?;
            let brute = oracle::complements_by_scan(&t);
            ensure(e.exhausted && e.complements.len() == brute.len(), format!("Z_{n} {:?}", t.indices()))?;
            tiles += 1;
        }
    }
    let mut sets = 0;
    for n in 1..=10 {
        for t in oracle::cyclic_classes(n) {
            let found = match find_spectrum(&t, u64::MAX).map_err(|e| e.to_string())?.outcome {
                SearchOutcome::Found(_) => true,
                SearchOutcome::NoneExists => false,
                SearchOutcome::Inconclusive => return Err("unbounded search inconclusive".into()),
            };
            ensure(found == oracle::has_spectrum_by_scan(&t), format!("spectrum Z_{n} {:?}", t.indices()))?;
            sets += 1;
        }
    }
    Ok(format!("{tiles} complement counts (n ≤ 12), {sets} spectrum verdicts (n ≤ 10)"))
}

fn criterion_7() -> Check {
    let run = lab(&["fuglede-scan", "--n-max", "12"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let v: Value = serde_json::from_str(&run.stdout).map_err(|e| e.to_string())?;
    ensure(v["discrepancies"] == 0 && v["inconclusive"] == 0, "discrepancies or open verdicts")?;
    let classes: u64 = v["rows"].as_array().ok_or("rows")?.iter().filter_map(|r| r["classes"].as_u64()).sum();
    Ok(format!("{classes} translation classes, 0 discrepancies, {:.1?}", run.elapsed))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let g = Group::cyclic(6).unwrap();
    let t = PointSet::new(&g, [0, 3]);
    let comps = enumerate_complements(&t, usize::MAX).map_err(|e| e.to_string())?.complements;
    ensure(comps.len() >= 2, "at least two complements")?;
    let mut runs = 0;
    for a in 0..comps.len() {
        for b in a + 1..comps.len() {
            let pair = [comps[a].clone(), comps[b].clone()];
            for p in [1u64, 5, 7] {
                for k0 in 0..=p {
                    let k = [k0, p - k0];
                    let spec = LayeredTileSpec::new(&t, &pair, &k).map_err(|e| e.to_string())?;
                    let r = build_layered_tile(&spec).map_err(|e| e.to_string())?;
                    ensure(r.set.len() == p as usize * 3, "|R| = p |G| / |T|")?;
                    ensure(oracle::tiles_by_counting(&r.set, &r.extended_tile), format!("R does not tile for k = {k:?}"))?;
                    verify_layer_sum_identity(&spec, &r).map_err(|e| e.to_string())?;
                    // and numerically, independent of the exact arithmetic
                    for v in 0..6 {
                        let lhs = oracle::vanishes_numerically(&r.set, v * p as usize);
                        let sum_zero = {
                            let (mut re, mut im) = (0f64, 0f64);
                            for (c, &ki) in pair.iter().zip(&k) {
                                for x in c.iter() {
                                    let a = std::f64::consts::TAU * (v * x) as f64 / 6.0;
                                    re += ki as f64 * a.cos();
                                    im += ki as f64 * a.sin();
                                }
                            }
                            re.hypot(im) < 1e-9
                        };
                        ensure(lhs == sum_zero, format!("identity at v = {v}, k = {k:?}"))?;
                    }
                    runs += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("runtime {elapsed:?}"))?;
    Ok(format!("{runs} (pair, k) combinations tile and satisfy the layer identity, {elapsed:.2?}"))
}

fn criterion_9(paths: &[PathBuf]) -> Check {
    for p in paths {
        let run = lab(&["replay", p.to_str().unwrap()]);
        let v: Value = serde_json::from_str(&run.stdout).map_err(|e| format!("{}: {e}", p.display()))?;
        ensure(
            run.code == 0 && v["identical"] == true && v["verdict"] == v["regenerated"],
            format!("{} does not replay", p.display()),
        )?;
    }
    Ok(format!("{} transcripts replay byte-identically", paths.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut results: Vec<(usize, Check)> = Vec::new();
    let mut transcripts = Vec::new();

    let c1 = criterion_1(dir.path());
    transcripts.push(dir.path().join("hadamard.json"));
    results.push((1, c1));

    match reproduce("prop-usc", dir.path()) {
        Ok((path, cert, elapsed)) => {
            transcripts.push(path);
            let t = data::builtin().map(|d| d.get("T").map(|m| m.values())).and_then(|r| r).map_err(|e| e.to_string());
            results.push((2, t.and_then(|t| criterion_2(&cert, elapsed, &t))));
            results.push((3, criterion_3(&cert)));
        }
        Err(e) => {
            results.push((2, Err(e.clone())));
            results.push((3, Err(e)));
        }
    }
    match reproduce("appendix", dir.path()) {
        Ok((path, cert, elapsed)) => {
            transcripts.push(path);
            results.push((4, criterion_4(&cert, elapsed)));
        }
        Err(e) => results.push((4, Err(e))),
    }
    results.push((5, criterion_5()));
    results.push((6, criterion_6()));
    results.push((7, criterion_7()));
    results.push((8, criterion_8()));
    results.push((9, criterion_9(&transcripts)));

    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(msg) => println!("PASS criterion {n}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
