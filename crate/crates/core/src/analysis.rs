//! Complexity parameters of polynomial instances with known roots: Smale's
//! `gamma`, `S_f`, the Mahler measure, cluster geometry, the partition `S_0`
//! into maximal strongly separated clusters, and the bracketed expressions
//! of the tree-size and precision bounds.
//!
//! Roots are carried as complex interval enclosures so that irrational roots
//! (`+-sqrt 2`, roots of `z^d - 2`) are handled rigorously. Quantities that
//! may be infinite (`sigma`, `R`) are `None` when infinite.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::functions::FuncExpr;
use crate::kernel::elementary::exp_real;
use crate::kernel::{ComplexBox, ComplexDyadic, ComplexInterval, DyInterval, Dyadic};

/// Working precision (grid bits) of the analysis computations.
pub const ANALYSIS_BITS: i64 = 128;

/// Largest number of roots (with multiplicity) `build_s0` will partition.
pub const S0_ROOT_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    #[serde(deserialize_with = "de_location")]
    pub location: ComplexInterval,
    pub multiplicity: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LocationRepr {
    Exact(ComplexDyadic),
    Enclosure(ComplexInterval),
}

fn de_location<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexInterval, D::Error> {
    Ok(match LocationRepr::deserialize(d)? {
        LocationRepr::Exact(z) => ComplexInterval::point(&z),
        LocationRepr::Enclosure(iv) => iv,
    })
}

/// Multiset of roots: distinct locations with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<RootEntry>,
}

impl RootSet {
    pub fn new(roots: Vec<RootEntry>) -> Result<Self> {
        let set = RootSet { roots };
        set.validate()?;
        Ok(set)
    }

    /// Roots at exact dyadic locations.
    pub fn exact(roots: &[(ComplexDyadic, u32)]) -> Result<Self> {
        Self::new(
            roots
                .iter()
                .map(|(z, m)| RootEntry {
                    location: ComplexInterval::point(z),
                    multiplicity: *m,
                })
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.roots.iter().enumerate() {
            if r.multiplicity == 0 {
                return Err(Error::InvalidInput(format!("root {i} has multiplicity 0")));
            }
            if r.location.re.lo() > r.location.re.hi() || r.location.im.lo() > r.location.im.hi() {
                return Err(Error::InvalidInput(format!(
                    "root {i} has an empty enclosure"
                )));
            }
            for (j, s) in self.roots[..i].iter().enumerate() {
                if r.location.intersects(&s.location) {
                    return Err(Error::InvalidInput(format!(
                        "roots {j} and {i} are not certifiably distinct"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of roots counted with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Coefficients (ascending) of `prod (t + (m - alpha))^mult` over `roots`,
/// i.e. the Taylor coefficients at `m` of the monic polynomial with those roots.
fn taylor_from_roots<'a, I>(roots: I, m: &ComplexInterval) -> Vec<ComplexInterval>
where
    I: IntoIterator<Item = &'a RootEntry>,
{
    let one = ComplexInterval::point(&ComplexDyadic::from_i64(1, 0));
    let mut coeffs = vec![one];
    for r in roots {
        let shift = m.sub(&r.location);
        for _ in 0..r.multiplicity {
            let mut next = vec![ComplexInterval::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].add(&c.mul(&shift));
            }
            coeffs = next
                .into_iter()
                .map(|c| c.round_grid(4 * ANALYSIS_BITS))
                .collect();
        }
    }
    coeffs
}

/// Taylor coefficients at an enclosure `m` of a polynomial with exact
/// coefficients, by repeated synthetic division in interval arithmetic.
fn taylor_shift_enclosure(coeffs: &[ComplexDyadic], m: &ComplexInterval) -> Vec<ComplexInterval> {
    let mut b: Vec<ComplexInterval> = coeffs.iter().map(ComplexInterval::point).collect();
    let n = b.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            b[j] = b[j].add(&m.mul(&b[j + 1]));
        }
    }
    b
}

/// `max_k (|h_k| / |h_0|)^(1/k)` from Taylor coefficient enclosures.
fn gamma_from_taylor(h: &[ComplexInterval], p: i64) -> Result<DyInterval> {
    let a0 = h[0].abs(p);
    if a0.contains_zero() {
        return Err(Error::ZeroDenominator);
    }
    let mut g = DyInterval::zero();
    for (k, hk) in h.iter().enumerate().skip(1) {
        let q = hk.abs(p).div(&a0, p).ok_or(Error::ZeroDenominator)?;
        g = g.max(&q.nth_root(k as u32, p));
    }
    Ok(g)
}

fn poly_coeffs(f: &FuncExpr) -> Result<&[ComplexDyadic]> {
    match f {
        FuncExpr::Poly { coeffs } => Ok(coeffs),
        _ => Err(Error::InvalidInput("analysis requires a polynomial".into())),
    }
}

/// Enclosure of Smale's `gamma(f, z)` for a polynomial, on the grid `2^-p`.
pub fn gamma_poly(f: &FuncExpr, z: &ComplexDyadic, p: i64) -> Result<DyInterval> {
    let coeffs = poly_coeffs(f)?;
    let h: Vec<ComplexInterval> = FuncExpr::taylor_shift(coeffs, z)
        .iter()
        .map(ComplexInterval::point)
        .collect();
    gamma_from_taylor(&h, p)
}

/// Enclosure of `S_f(z) = sum 1/|z - alpha|` over roots with multiplicity.
pub fn s_f(roots: &RootSet, z: &ComplexInterval, p: i64) -> Result<DyInterval> {
    let mut sum = DyInterval::zero();
    for r in &roots.roots {
        let d = z.sub(&r.location).abs(p + 4);
        let inv = d.recip(p + 4).ok_or(Error::ZeroDistance)?;
        sum = sum.add(&inv.scale(&Dyadic::from_i64(r.multiplicity as i64)));
    }
    Ok(sum.round_grid(p))
}

/// Enclosure of the Mahler measure `|a_d| prod max(1, |alpha|)`.
pub fn mahler(f: &FuncExpr, roots: &RootSet, p: i64) -> Result<DyInterval> {
    let coeffs = poly_coeffs(f)?;
    let lead = ComplexInterval::point(coeffs.last().expect("validated polynomial")).abs(p);
    let one = Dyadic::one();
    let mut prod = lead;
    for r in &roots.roots {
        let a = r.location.abs(p);
        if a.lo() > &one {
            prod = prod.mul(&a.pow(r.multiplicity)).round_rel(p as u32);
        } else if a.hi() > &one {
            return Err(Error::AmbiguousBoundary);
        }
    }
    Ok(prod)
}

/// `c_0 = 2^17 e^2`.
fn c0(p: i64) -> Result<DyInterval> {
    Ok(exp_real(&Dyadic::from_i64(2), p)?.mul_pow2(17))
}

/// Geometry of a cluster `C` of roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterGeometry {
    pub members: Vec<RootEntry>,
    /// `|C|`, counted with multiplicity.
    pub size: u32,
    /// Multiplicity-weighted centroid.
    pub centroid: ComplexInterval,
    pub r_c: DyInterval,
    /// `None` when the cluster holds every root.
    pub sigma_c: Option<DyInterval>,
    pub gamma_c: DyInterval,
    /// `|C| / (c_0 gamma_C)`; `None` when infinite.
    pub big_r_c: Option<DyInterval>,
    /// Radius `R_C / |C|^3` of the disc `D_C` around the centroid.
    pub d_c_radius: Option<DyInterval>,
    pub strongly_separated: bool,
}

/// Geometry of the sub-multiset `members` (indices into `roots.roots`).
pub fn cluster_geometry(roots: &RootSet, members: &[usize]) -> Result<ClusterGeometry> {
    if members.is_empty() {
        return Err(Error::InvalidInput("empty cluster".into()));
    }
    let p = ANALYSIS_BITS;
    let inside: Vec<&RootEntry> = members.iter().map(|&i| &roots.roots[i]).collect();
    let outside: Vec<&RootEntry> = roots
        .roots
        .iter()
        .enumerate()
        .filter(|(i, _)| !members.contains(i))
        .map(|(_, r)| r)
        .collect();
    let size: u32 = inside.iter().map(|r| r.multiplicity).sum();

    let centroid = if inside.len() == 1 {
        inside[0].location.clone()
    } else {
        let mut sum = ComplexInterval::zero();
        for r in &inside {
            sum = sum.add(
                &r.location
                    .scale(&DyInterval::from_i64(r.multiplicity as i64)),
            );
        }
        let n = num_bigint::BigInt::from(size);
        ComplexInterval::new(sum.re.div_int(&n, p), sum.im.div_int(&n, p))
    };

    let r_c = if inside.len() == 1 {
        DyInterval::zero()
    } else {
        inside
            .iter()
            .map(|r| centroid.sub(&r.location).abs(p))
            .reduce(|a, b| a.max(&b))
            .expect("nonempty cluster")
    };

    let sigma_c = outside
        .iter()
        .map(|r| centroid.sub(&r.location).abs(p))
        .reduce(|a, b| a.min(&b));

    let h = taylor_from_roots(outside.iter().copied(), &centroid);
    let gamma_c = gamma_from_taylor(&h, p)?;

    let (big_r_c, d_c_radius, strongly_separated) = if outside.is_empty() {
        (None, None, true)
    } else {
        let c0 = c0(p)?;
        let denom = c0.mul(&gamma_c);
        let size_iv = DyInterval::from_i64(size as i64);
        let big_r = size_iv.div(&denom, p).ok_or(Error::ZeroDenominator)?;
        let d_r = big_r.div_int(&num_bigint::BigInt::from(size).pow(3), p);
        // r_C <= R_C / (8 |C|^3)  <=>  8 |C|^2 c_0 gamma_C r_C <= 1
        let lhs = r_c
            .mul(&denom)
            .scale(&Dyadic::from_i64(8 * (size as i64) * (size as i64)));
        let ss = r_c.is_point() && r_c.lo().is_zero() || lhs.hi() <= &Dyadic::one();
        (Some(big_r), Some(d_r), ss)
    };

    Ok(ClusterGeometry {
        members: inside.into_iter().cloned().collect(),
        size,
        centroid,
        r_c,
        sigma_c,
        gamma_c,
        big_r_c,
        d_c_radius,
        strongly_separated,
    })
}

fn approx_dist(a: &ComplexInterval, b: &ComplexInterval) -> f64 {
    let (ar, ai) = a.midpoint().to_f64();
    let (br, bi) = b.midpoint().to_f64();
    (ar - br).hypot(ai - bi)
}

/// Indices of the roots whose enclosure may meet `2 B_0`.
pub fn roots_in_double_box(roots: &RootSet, b0: &ComplexBox) -> Vec<usize> {
    let big = b0.scale(&Dyadic::from_i64(2));
    (0..roots.roots.len())
        .filter(|&i| big.contains_enclosure(&roots.roots[i].location) != Some(false))
        .collect()
}

/// Partition of the roots in `2 B_0` into strongly separated clusters such
/// that no two parts merge into a strongly separated cluster.
///
/// Starts from singletons (always strongly separated) and repeatedly merges
/// the closest pair of parts whose union is strongly separated.
pub fn build_s0(roots: &RootSet, b0: &ComplexBox) -> Result<Vec<ClusterGeometry>> {
    let idx = roots_in_double_box(roots, b0);
    let count: usize = idx
        .iter()
        .map(|&i| roots.roots[i].multiplicity as usize)
        .sum();
    if count > S0_ROOT_CAP {
        return Err(Error::TooManyRoots {
            count,
            cap: S0_ROOT_CAP,
        });
    }
    let mut parts: Vec<(Vec<usize>, ClusterGeometry)> = idx
        .iter()
        .map(|&i| Ok((vec![i], cluster_geometry(roots, &[i])?)))
        .collect::<Result<_>>()?;
    loop {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                pairs.push((
                    approx_dist(&parts[a].1.centroid, &parts[b].1.centroid),
                    a,
                    b,
                ));
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        let mut merged = None;
        for (_, a, b) in pairs {
            let mut members = parts[a].0.clone();
            members.extend(&parts[b].0);
            members.sort_unstable();
            let g = cluster_geometry(roots, &members)?;
            if g.strongly_separated {
                merged = Some((a, b, members, g));
                break;
            }
        }
        match merged {
            Some((a, b, members, g)) => {
                parts.remove(b);
                parts[a] = (members, g);
            }
            None => break,
        }
    }
    Ok(parts.into_iter().map(|(_, g)| g).collect())
}

/// Bracketed expressions of the polynomial bounds (base-2 logarithms, no
/// asymptotic constants).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryBounds {
    /// `d^2 log w(B_0) + d^2 log d - d sum |C| log sigma_C`.
    pub tree_bound: f64,
    /// `d^2 log M(f) + d^3`.
    pub intpoly_bound: f64,
    /// `d^3 log M(f) - d^2 log omin(r_B0) - d sum |C| log sigma_C
    ///  - d log omin_C |f_|C|(m_C)|`.
    pub precision_bound: f64,
    pub mahler: DyInterval,
    pub mahler_f64: f64,
    pub degree: usize,
}

fn log2_mid(x: &DyInterval) -> f64 {
    x.midpoint().to_f64().log2()
}

/// `log2 min(1, x)` for a positive enclosure.
fn log2_omin(x: &DyInterval) -> f64 {
    log2_mid(x).min(0.0)
}

/// Bounds evaluated with `S_0` from [`build_s0`].
pub fn predicted_bounds(f: &FuncExpr, roots: &RootSet, b0: &ComplexBox) -> Result<TheoryBounds> {
    let s0 = build_s0(roots, b0)?;
    bounds_for_partition(f, roots, b0, &s0)
}

/// Bounds evaluated with an explicitly chosen partition into clusters.
pub fn bounds_for_partition(
    f: &FuncExpr,
    roots: &RootSet,
    b0: &ComplexBox,
    parts: &[ClusterGeometry],
) -> Result<TheoryBounds> {
    let p = ANALYSIS_BITS;
    let coeffs = poly_coeffs(f)?;
    let d = coeffs.len() - 1;
    let df = d as f64;
    let m = mahler(f, roots, p)?;
    let log_m = log2_mid(&m);
    let log_w = log2_mid(&DyInterval::point(b0.width().clone()));
    let sigma_sum: f64 = parts
        .iter()
        .filter_map(|c| c.sigma_c.as_ref().map(|s| c.size as f64 * log2_mid(s)))
        .sum();
    let log_d = if d > 0 { df.log2() } else { 0.0 };
    let tree_bound = df * df * log_w + df * df * log_d - df * sigma_sum;
    let intpoly_bound = df * df * log_m + df * df * df;

    let r_b0 = DyInterval::point(b0.radius_upper());
    let mut min_coeff: Option<f64> = None;
    for c in parts {
        let t = taylor_shift_enclosure(coeffs, &c.centroid);
        let v = t
            .get(c.size as usize)
            .map(|z| z.abs(p))
            .unwrap_or_else(DyInterval::zero);
        let l = if v.hi().is_zero() {
            f64::NEG_INFINITY
        } else {
            log2_omin(&v)
        };
        min_coeff = Some(min_coeff.map_or(l, |x| x.min(l)));
    }
    let precision_bound = df * df * df * log_m
        - df * df * log2_omin(&r_b0)
        - df * sigma_sum
        - df * min_coeff.unwrap_or(0.0);
    Ok(TheoryBounds {
        tree_bound,
        intpoly_bound,
        precision_bound,
        mahler_f64: m.midpoint().to_f64(),
        mahler: m,
        degree: d,
    })
}

/// Singleton partition: every distinct root in `2 B_0` forms its own cluster.
pub fn singleton_partition(roots: &RootSet, b0: &ComplexBox) -> Result<Vec<ClusterGeometry>> {
    roots_in_double_box(roots, b0)
        .into_iter()
        .map(|i| cluster_geometry(roots, &[i]))
        .collect()
}
