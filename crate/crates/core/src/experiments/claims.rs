use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{run_claim, VerificationReport};
use crate::caps::Caps;
use crate::density::density_row_with;
use crate::error::{Error, Result};
use crate::geometry::{
    certify_vertices, contains_polytope, ex_polytope_with, face_restrict, membership_program,
    Containment, PointSet, Polytope,
};
use crate::models::{
    beta_distribution, beta_q, beta_rule, derive_lower_rule, dm_construction,
    multinomial_distribution, BetaParam, MultinomialParams,
};
use crate::rational::{format_rational, int, pow, ratio, Rational};
use crate::shapes::{
    build_bicomb, build_comb, build_comb_replace, build_complete, build_max_balanced,
    count_pattern_with, enumerate_shapes, labeling_count, parse_shape, pattern_counts_dp,
    pattern_counts_scan, pattern_counts, wedderburn_etherington, TreeShape,
};

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn gir5() -> TreeShape {
    parse_shape("(*,((*,*),(*,*)))").expect("literal shape")
}

/// Density of the five-leaf example tree at four leaves is (2/5, 3/5).
pub fn verify_density_example(caps: &Caps) -> VerificationReport {
    run_claim("density-example", |c| {
        let t = parse_shape("((*,*),((*,*),*))")?;
        let row = density_row_with(&t, 4, caps)?;
        c.witness("row", fmt_point(row.probs()));
        c.require(row.probs() == [ratio(2, 5), ratio(3, 5)], || {
            format!("expected (2/5, 3/5), got {}", fmt_point(row.probs()))
        });
        Ok(())
    })
}

/// The labelings of all shapes in `RB_U(n)` partition the `(2n-3)!!` labeled trees.
pub fn verify_labeling_partition(ns: RangeInclusive<usize>) -> VerificationReport {
    run_claim("labeling-partition", |c| {
        for n in ns {
            if n < 2 {
                return Err(Error::domain("labeling partition starts at n = 2"));
            }
            let total: BigUint = enumerate_shapes(n)?.iter().map(labeling_count).sum();
            let expected: BigUint = (1..=2 * n as u64 - 3).step_by(2).map(BigUint::from).product();
            c.witness(format!("n={n}"), &total);
            c.require(total == expected, || format!("n = {n}: {total} != {expected}"));
        }
        Ok(())
    })
}

/// The four-leaf split probabilities match their closed forms in β, and
/// `q_4(2) -> 3/7` at β = ∞.
pub fn verify_beta_pinning() -> VerificationReport {
    run_claim("beta-pinning", |c| {
        for b in [ratio(-3, 2), int(-1), int(0), int(1), ratio(7, 3)] {
            let beta = BetaParam::finite(b.clone())?;
            let den = int(18) + int(7) * &b;
            let two_q1 = int(2) * beta_q(4, 1, &beta)?;
            let q2 = beta_q(4, 2, &beta)?;
            let want1 = (int(12) + int(4) * &b) / &den;
            let want2 = (int(6) + int(3) * &b) / &den;
            c.require(two_q1 == want1, || format!("beta = {b}: 2 q_4(1) = {two_q1}, want {want1}"));
            c.require(q2 == want2, || format!("beta = {b}: q_4(2) = {q2}, want {want2}"));
        }
        let q_inf = beta_q(4, 2, &BetaParam::Infinity)?;
        c.witness("q_4(2) at infinity", format_rational(&q_inf));
        c.require(q_inf == ratio(3, 7), || format!("q_4(2) at infinity = {q_inf}"));
        Ok(())
    })
}

/// The lower-rule recurrence maps beta rules to beta rules.
pub fn verify_lower_rule(ns: RangeInclusive<usize>) -> VerificationReport {
    run_claim("lower-rule-consistency", |c| {
        let betas = [
            BetaParam::finite(int(-1))?,
            BetaParam::finite(int(0))?,
            BetaParam::finite(ratio(5, 2))?,
            BetaParam::Infinity,
        ];
        let mut checked = 0;
        for n in ns {
            for beta in &betas {
                let lower = derive_lower_rule(&beta_rule(n, beta)?)?;
                let want = beta_rule(n - 1, beta)?;
                c.require(lower == want, || format!("n = {n}, beta = {beta}: rules differ"));
                checked += 1;
            }
        }
        c.witness("pairs checked", checked);
        Ok(())
    })
}

/// `EX_4^m` is a segment from the comb corner to the most balanced tree's
/// density; at `m = 2^k` its Bal_4 end is `(3·2^k − 5)/(7·2^k − 21)`, the ends
/// do not increase with `m`, stay above 3/7, and the β = ∞ point lies inside.
pub fn verify_ex4(m_max: usize, caps: &Caps) -> VerificationReport {
    run_claim("ex4-vertices", |c| {
        if m_max < 5 {
            return Err(Error::domain("verify_ex4 needs m_max >= 5"));
        }
        let comb = [int(1), int(0)];
        let beta_inf = [ratio(4, 7), ratio(3, 7)];
        let polys = (5..=m_max)
            .into_par_iter()
            .map(|m| ex_polytope_with(4, m, caps).map(|p| (m, p)))
            .collect::<Result<Vec<_>>>()?;
        let mut previous: Option<Rational> = None;
        for (m, poly) in polys {
            c.require(poly.vertices().len() == 2, || {
                format!("m = {m}: {} vertices", poly.vertices().len())
            });
            c.require(poly.is_vertex_point(&comb), || format!("m = {m}: (1,0) is not a vertex"));
            let Some(other) = poly.vertex_points().into_iter().find(|v| *v != comb) else {
                c.require(false, || format!("m = {m}: no non-comb vertex"));
                continue;
            };
            let bal = other[1].clone();
            c.witness(format!("m={m}"), format_rational(&bal));
            let column_max = poly.points().iter().map(|p| p[1].clone()).max().expect("nonempty");
            c.require(column_max == bal, || format!("m = {m}: vertex is not the Bal_4 maximum"));
            let balanced = density_row_with(&build_max_balanced(m)?, 4, caps)?;
            c.require(balanced.probs()[1] == bal, || {
                format!("m = {m}: most balanced tree gives {}", balanced.probs()[1])
            });
            if m.is_power_of_two() {
                let mm = int(m as i64);
                let closed = (int(3) * &mm - int(5)) / (int(7) * &mm - int(21));
                c.require(closed == bal, || format!("m = {m}: closed form {closed} != {bal}"));
            }
            if let Some(prev) = &previous {
                c.require(bal <= *prev, || format!("m = {m}: {bal} exceeds previous {prev}"));
            }
            c.require(bal > ratio(3, 7), || format!("m = {m}: {bal} is not above 3/7"));
            c.require(poly.contains_point(&beta_inf)?, || {
                format!("m = {m}: (4/7, 3/7) lies outside")
            });
            previous = Some(bal);
        }
        Ok(())
    })
}

/// The proven vertex families of `EX_5^n` certify as vertices, and the faces
/// `p_3 = 0` and `p_2 = 0` hold exactly the expected trees.
pub fn verify_ex5_vertices(ns: RangeInclusive<usize>, caps: &Caps) -> VerificationReport {
    run_claim("ex5-vertex-families", |c| {
        for n in ns {
            if n < 5 {
                return Err(Error::domain("five-leaf vertex families need n >= 5"));
            }
            let poly = ex_polytope_with(5, n, caps)?;
            c.witness(format!("n={n} vertices"), poly.vertices().len());
            if n == 5 {
                c.require(poly.vertices().len() == 3, || "EX_5^5 should be the full simplex".into());
                continue;
            }
            let families = [
                ("comb", build_comb(n)?),
                ("comb(Gir_5)", build_comb_replace(&gir5(), n - 4)?),
                ("bicomb", build_bicomb(n / 2, n - n / 2)?),
                ("most balanced", build_max_balanced(n)?),
            ];
            for (name, t) in &families {
                let point = density_row_with(t, 5, caps)?;
                c.require(poly.is_vertex_point(point.probs()), || {
                    format!("n = {n}: {name} {} is not a vertex", t.encoding())
                });
            }
            let tags = |face: &Polytope| -> BTreeSet<String> {
                face.point_set().provenance().iter().cloned().collect()
            };
            let no_bal: BTreeSet<String> =
                [families[0].1.encoding().to_string(), families[1].1.encoding().to_string()].into();
            let face3 = tags(&face_restrict(&poly, 2)?);
            c.require(face3 == no_bal, || format!("n = {n}: face p_3 = 0 holds {face3:?}"));
            let mut no_gir: BTreeSet<String> = (1..=n / 2)
                .map(|i| build_bicomb(i, n - i).map(|t| t.encoding().to_string()))
                .collect::<Result<_>>()?;
            no_gir.insert(families[0].1.encoding().to_string());
            let face2 = tags(&face_restrict(&poly, 1)?);
            c.require(face2 == no_gir, || format!("n = {n}: face p_2 = 0 holds {face2:?}"));
        }
        Ok(())
    })
}

/// Over all of `RB_U(n)`, the number of Comb_5 restrictions is uniquely
/// minimized by the most balanced tree.
pub fn verify_c5_min(ns: RangeInclusive<usize>, caps: &Caps) -> VerificationReport {
    run_claim("c5-minimizer", |c| {
        let comb5 = build_comb(5)?;
        for n in ns {
            if n < 7 {
                return Err(Error::domain("unique minimizer claim needs n >= 7"));
            }
            caps.check_shapes(wedderburn_etherington(n).unwrap_or(u128::MAX))?;
            let index = enumerate_shapes(n)?;
            let values: Vec<u128> = index
                .shapes()
                .par_iter()
                .map(|t| count_pattern_with(t, &comb5, caps))
                .collect();
            let min = *values.iter().min().expect("nonempty");
            let argmins: Vec<&TreeShape> = index
                .iter()
                .zip(&values)
                .filter(|(_, v)| **v == min)
                .map(|(t, _)| t)
                .collect();
            c.witness(format!("n={n} min c5"), min);
            let balanced = build_max_balanced(n)?;
            c.require(argmins == [&balanced], || {
                let names: Vec<&str> = argmins.iter().map(|t| t.encoding()).collect();
                format!("n = {n}: minimizers {names:?}")
            });
        }
        Ok(())
    })
}

/// The β = ∞ five-leaf point is (4/21, 1/7, 2/3), and complete trees on
/// `2^k` leaves have Gir_5 density 1/7 and Bal_5 density `2/3 + 20/(21(2^k − 3))`.
pub fn verify_beta_limits(caps: &Caps) -> VerificationReport {
    run_claim("beta-infinity-limit", |c| {
        let inf = beta_distribution(5, &BetaParam::Infinity)?;
        c.witness("beta infinity", fmt_point(inf.probs()));
        c.require(inf.probs() == [ratio(4, 21), ratio(1, 7), ratio(2, 3)], || {
            format!("beta = inf gives {}", fmt_point(inf.probs()))
        });
        for k in 3..=5u32 {
            let t = build_complete(k)?;
            let m = 1i64 << k;
            let row = density_row_with(&t, 5, caps)?;
            let p = row.probs();
            let want3 = ratio(2, 3) + ratio(20, 21 * (m - 3));
            c.witness(format!("k={k}"), fmt_point(p));
            c.require(p[1] == ratio(1, 7), || format!("k = {k}: Gir_5 density {}", p[1]));
            c.require(p[2] == want3, || format!("k = {k}: Bal_5 density {} != {want3}", p[2]));
            c.require(p[0] == int(1) - &p[1] - &p[2], || format!("k = {k}: row does not sum to 1"));
            let counts = pattern_counts(&t, 5, caps)?;
            let mm = int(m);
            let b5 = pow(&int(2), k - 2)
                * (&mm - int(4))
                * (&mm - int(2))
                * (&mm - int(1))
                * (int(7) * &mm - int(11))
                / int(315);
            let g5 = pow(&int(2), k) / int(8)
                * (&mm - int(4))
                * (&mm - int(3))
                * (&mm - int(2))
                * (&mm - int(1))
                / int(105);
            c.require(Rational::from_integer(counts[2].into()) == b5, || {
                format!("k = {k}: b5 = {}, closed form {b5}", counts[2])
            });
            c.require(Rational::from_integer(counts[1].into()) == g5, || {
                format!("k = {k}: g5 = {}, closed form {g5}", counts[1])
            });
        }
        Ok(())
    })
}

/// Sup-norm gap `δ_m` between the density of the most balanced `m`-leaf tree
/// and its leaf-edge multinomial approximation; `δ_m · m` must stay within a
/// factor 2 across `ms`.
pub fn verify_multinomial_limit(n: usize, ms: &[usize], caps: &Caps) -> VerificationReport {
    run_claim(&format!("multinomial-limit-n{n}"), |c| {
        if !(4..=5).contains(&n) {
            return Err(Error::domain("multinomial limit is checked for n = 4 and n = 5"));
        }
        let rows = ms
            .par_iter()
            .map(|&m| {
                let t = build_max_balanced(m)?;
                let dens = density_row_with(&t, n, caps)?;
                let mult = multinomial_distribution(&dm_construction(&t)?, n)?;
                let delta = dens
                    .probs()
                    .iter()
                    .zip(mult.probs())
                    .map(|(a, b)| (a - b).abs())
                    .max()
                    .expect("nonempty");
                Ok((m, delta))
            })
            .collect::<Result<Vec<_>>>()?;
        let scaled: Vec<Rational> = rows.iter().map(|(m, d)| d * int(*m as i64)).collect();
        for ((m, d), s) in rows.iter().zip(&scaled) {
            c.witness(format!("m={m} delta"), format_rational(d));
            c.witness(format!("m={m} delta*m"), format_rational(s));
            c.require(d.is_positive(), || format!("m = {m}: gap is zero"));
        }
        if let (Some(lo), Some(hi)) = (scaled.iter().min(), scaled.iter().max()) {
            let ratio_hi_lo = if lo.is_zero() { None } else { Some(hi / lo) };
            c.witness(
                "max/min delta*m",
                ratio_hi_lo.as_ref().map_or("undefined".into(), format_rational),
            );
            c.require(ratio_hi_lo.is_some_and(|r| r <= int(2)), || {
                "delta*m varies by more than a factor 2".into()
            });
        }
        Ok(())
    })
}

/// On the cherry skeleton `P(Bal_5) = 10 t_1^3 t_2^2 + 10 t_1^2 t_2^3`, and the
/// model is normalized for every skeleton up to 4 leaves and `n <= 6`.
pub fn verify_multinomial_pinning() -> VerificationReport {
    run_claim("multinomial-pinning", |c| {
        let cherry = parse_shape("(*,*)")?;
        let bal5 = build_bicomb(2, 3)?;
        let samples = [
            [ratio(1, 3), ratio(1, 3), ratio(1, 3)],
            [int(0), ratio(1, 2), ratio(1, 2)],
            [ratio(1, 2), ratio(1, 4), ratio(1, 4)],
            [ratio(1, 10), ratio(3, 5), ratio(3, 10)],
            [ratio(2, 7), ratio(4, 7), ratio(1, 7)],
        ];
        for t in samples {
            let params = MultinomialParams::new(cherry.clone(), t.to_vec())?;
            let p = multinomial_distribution(&params, 5)?.prob(&bal5);
            let want = int(10) * pow(&t[1], 3) * pow(&t[2], 2) + int(10) * pow(&t[1], 2) * pow(&t[2], 3);
            c.require(p == want, || format!("weights {}: {p} != {want}", fmt_point(&t)));
        }
        let mut cases = 0;
        for m in 1..=4 {
            for skeleton in enumerate_shapes(m)?.iter() {
                let edges = 2 * m - 1;
                let total = int((edges * (edges + 1) / 2) as i64);
                let weights: Vec<Rational> =
                    (1..=edges).map(|e| int(e as i64) / &total).collect();
                let params = MultinomialParams::new(skeleton.clone(), weights)?;
                for n in 1..=6 {
                    let sum: Rational = multinomial_distribution(&params, n)?.probs().iter().sum();
                    c.require(sum.is_one(), || {
                        format!("{} at n = {n}: mass {sum}", skeleton.encoding())
                    });
                    cases += 1;
                }
            }
        }
        c.witness("normalization cases", cases);
        Ok(())
    })
}

/// The dynamic program and the exhaustive subset scan agree on random pairs.
pub fn verify_pattern_oracle(pairs: usize, m_max: usize, n_max: usize, seed: u64) -> VerificationReport {
    run_claim("pattern-oracle", |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nonzero = 0;
        for _ in 0..pairs {
            let m = rng.gen_range(1..=m_max);
            let n = rng.gen_range(1..=n_max.min(m));
            let hosts = enumerate_shapes(m)?;
            let patterns = enumerate_shapes(n)?;
            let t = &hosts.shapes()[rng.gen_range(0..hosts.len())];
            let pi = rng.gen_range(0..patterns.len());
            let scan = pattern_counts_scan(t, n)?[pi];
            let dp = pattern_counts_dp(t, n)?[pi];
            if scan > 0 {
                nonzero += 1;
            }
            c.require(scan == dp, || {
                format!("{} in {}: scan {scan}, dp {dp}", patterns.shapes()[pi], t)
            });
        }
        c.witness("pairs", pairs);
        c.witness("nonzero counts", nonzero);
        Ok(())
    })
}

/// `EX_5^{m+1} ⊆ EX_5^m`, while a vertex of `EX_5^m` pushed slightly outward
/// and added to `EX_5^{m+1}` is rejected with a checked certificate.
pub fn verify_monotone_containment(ms: RangeInclusive<usize>, caps: &Caps) -> VerificationReport {
    run_claim("monotone-containment", |c| {
        let (lo, hi) = (*ms.start(), *ms.end());
        if lo < 5 {
            return Err(Error::domain("monotone containment is checked from m = 5"));
        }
        let polys = (lo..=hi + 1)
            .into_par_iter()
            .map(|m| ex_polytope_with(5, m, caps))
            .collect::<Result<Vec<_>>>()?;
        let eps = ratio(1, 1000);
        for (i, m) in (lo..=hi).enumerate() {
            let (outer, inner) = (&polys[i], &polys[i + 1]);
            let holds = contains_polytope(inner, outer)?.holds();
            c.witness(format!("m={m}"), holds);
            c.require(holds, || format!("EX_5^{} is not inside EX_5^{m}", m + 1));

            // a vertex pushed away from the vertex centroid leaves the polytope;
            // prefer the vertex farthest inside the simplex
            let verts = outer.vertex_points();
            let centroid: Vec<Rational> = (0..3)
                .map(|k| verts.iter().map(|v| &v[k]).sum::<Rational>() / int(verts.len() as i64))
                .collect();
            let v = verts
                .iter()
                .max_by_key(|v| v.iter().min().cloned())
                .expect("nonempty");
            let pushed: Vec<Rational> =
                v.iter().zip(&centroid).map(|(a, b)| a + (a - b) * &eps).collect();
            let mut points = inner.points().to_vec();
            let mut tags = inner.point_set().provenance().to_vec();
            points.push(pushed.clone());
            tags.push("perturbed".into());
            let perturbed = certify_vertices(PointSet::new(3, points, tags)?)?;
            match contains_polytope(&perturbed, outer)? {
                Containment::Violated {
                    point, certificate, ..
                } => {
                    let verts: Vec<Vec<Rational>> =
                        outer.vertex_points().into_iter().map(<[_]>::to_vec).collect();
                    let lp = membership_program(&verts, &point);
                    c.require(point == pushed, || format!("m = {m}: wrong witness {point:?}"));
                    c.require(certificate.verify(&lp), || format!("m = {m}: certificate fails"));
                }
                Containment::Contained => {
                    c.require(false, || format!("m = {m}: perturbed point accepted"))
                }
            }
        }
        Ok(())
    })
}
