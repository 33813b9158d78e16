//! Brute-force reimplementation of the whole detector on plain vectors,
//! compared against the library on small instances sharing one PRNG stream.

use odhd_core::odhd::fit;
use odhd_core::{rng, Label, OdhdConfig, Variant};
use rand::seq::index;
use rand::Rng;

struct Brute {
    h_oc: Vec<i64>,
    threshold: f64,
    sims: Vec<f64>,
    seeds: Vec<Vec<i64>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    k: usize,
    cim: bool,
}

fn rotate(v: &[i64], r: usize) -> Vec<i64> {
    let d = v.len();
    let mut out = vec![0; d];
    for i in 0..d {
        out[(i + r) % d] = v[i];
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..a.len() {
        s += a[i] as i128 * b[i] as i128;
    }
    s
}

impl Brute {
    fn level(&self, j: usize, v: f64) -> usize {
        let w = (self.hi[j] - self.lo[j]) / self.k as f64;
        if w <= 0.0 || v <= self.lo[j] {
            return 1;
        }
        let l = 1 + ((v - self.lo[j]) / w).floor() as usize;
        l.min(self.k)
    }

    fn encode(&self, x: &[f64]) -> Vec<i64> {
        let d = self.seeds[0].len();
        let mut h = vec![0i64; d];
        for (i, &v) in x.iter().enumerate() {
            let p = rotate(&self.seeds[self.level(i, v) - 1], i);
            for t in 0..d {
                h[t] += p[t];
            }
        }
        h
    }

    fn sim(&self, h_oc: &[i64], h: &[i64]) -> f64 {
        if self.cim {
            dot(h_oc, h) as f64
        } else {
            let c = dot(h_oc, h) as f64 / (dot(h_oc, h_oc) as f64 * dot(h, h) as f64).sqrt();
            c.clamp(-1.0, 1.0)
        }
    }

    fn threshold(&self, sims: &[f64]) -> f64 {
        let n = sims.len() as f64;
        let mu = sims.iter().sum::<f64>() / n;
        let dev = if self.cim {
            sims.iter().map(|s| (s - mu).abs()).sum::<f64>() / n
        } else {
            (sims.iter().map(|s| (s - mu) * (s - mu)).sum::<f64>() / n).sqrt()
        };
        mu + 2.0 * dev
    }

    fn fit(rows: &[Vec<f64>], d: usize, k: usize, epochs: usize, cim: bool, seed: u64) -> Self {
        let mut rng = rng::master(seed);
        let m = rows[0].len();
        let lo: Vec<f64> = (0..m).map(|j| rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min)).collect();
        let hi: Vec<f64> =
            (0..m).map(|j| rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max)).collect();

        let e = d / (2 * k);
        let mut s: Vec<i64> = (0..d).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let flips = index::sample(&mut rng, d, (k - 1) * e).into_vec();
        let mut seeds = vec![s.clone()];
        for step in 0..k - 1 {
            for &p in &flips[step * e..(step + 1) * e] {
                s[p] = -s[p];
            }
            seeds.push(s.clone());
        }

        let mut rows = rows.to_vec();
        if cim {
            let n = rows.len();
            let target = n.next_power_of_two();
            let extra = index::sample(&mut rng, n, target - n).into_vec();
            for i in extra {
                rows.push(rows[i].clone());
            }
        }

        let mut b = Brute { h_oc: vec![], threshold: 0.0, sims: vec![], seeds, lo, hi, k, cim };
        let enc: Vec<Vec<i64>> = rows.iter().map(|x| b.encode(x)).collect();
        let mut h_oc = vec![0i64; d];
        for h in &enc {
            for t in 0..d {
                h_oc[t] += h[t];
            }
        }
        let sims: Vec<f64> = enc.iter().map(|h| b.sim(&h_oc, h)).collect();
        let mut r = b.threshold(&sims);
        for _ in 0..epochs {
            for h in &enc {
                if b.sim(&h_oc, h) < r {
                    for t in 0..d {
                        h_oc[t] += h[t];
                    }
                }
            }
            let sims: Vec<f64> = enc.iter().map(|h| b.sim(&h_oc, h)).collect();
            r = b.threshold(&sims);
        }
        b.sims = enc.iter().map(|h| b.sim(&h_oc, h)).collect();
        b.h_oc = h_oc;
        b.threshold = r;
        b
    }

    fn label(&self, x: &[f64]) -> Label {
        if self.sim(&self.h_oc, &self.encode(x)) >= self.threshold {
            Label::Inlier
        } else {
            Label::Outlier
        }
    }
}

fn rows(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng::derived(seed, 99);
    (0..n).map(|_| (0..3).map(|_| r.random_range(-2.0..2.0)).collect()).collect()
}

fn check(n: usize, variant: Variant, seed: u64) {
    let train = rows(n, seed);
    let queries = rows(20, seed + 1000);
    let cfg = OdhdConfig { dims: 32, levels: 4, epochs: 2, variant };
    let (model, report) = fit(&train, &cfg, &mut rng::master(seed)).unwrap();
    let brute = Brute::fit(&train, 32, 4, 2, variant == Variant::CimFriendly, seed);

    assert_eq!(model.h_oc().elems(), &brute.h_oc[..], "H_OC, seed {seed}");
    assert_eq!(report.similarities.values(), &brute.sims[..], "S, seed {seed}");
    assert_eq!(model.threshold(), brute.threshold, "R, seed {seed}");
    for x in train.iter().chain(&queries) {
        assert_eq!(model.detect(x).unwrap().0, brute.label(x));
    }
}

#[test]
fn tiny_instance_matches_brute_force_software() {
    for seed in 0..20 {
        check(8, Variant::Software, seed);
    }
}

#[test]
fn tiny_instance_matches_brute_force_cim() {
    for seed in 0..20 {
        check(8, Variant::CimFriendly, seed);
    }
}

#[test]
fn padded_instance_matches_brute_force() {
    for seed in 0..20 {
        check(6, Variant::CimFriendly, seed);
    }
}
