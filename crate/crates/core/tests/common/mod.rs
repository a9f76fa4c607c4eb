//! Independent oracles and shared checks for the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use multistat::algebra::{
    isolate_positive_roots, rat, rat_int, subresultant_prs, MultiPoly, Rat, RealBound,
    SturmSequence, UniPoly,
};
use multistat::model::{
    conservation_laws, embedded_model, parse_polynomial, steady_state_system, AlgebraicSystem,
    ConservationLaw, OdeModel,
};
use multistat::reduction::{reduce, DependencyGraph, ReducedSystem};
use multistat::scan::{convex_hull_3d, orient3d, Point3};
use num_traits::{One, Signed, Zero};

pub struct Pipeline {
    pub model: OdeModel,
    pub laws: Vec<ConservationLaw>,
    pub system: AlgebraicSystem,
    pub graph: DependencyGraph,
    pub reduced: ReducedSystem,
}

pub fn pipeline(name: &str) -> Pipeline {
    let model = embedded_model(name).unwrap();
    let laws = conservation_laws(&model).unwrap();
    let system = steady_state_system(&model).unwrap();
    let (graph, reduced) = reduce(&system).unwrap();
    Pipeline {
        model,
        laws,
        system,
        graph,
        reduced,
    }
}

/// Determinant by Gaussian elimination over the rationals.
pub fn determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Resultant as the determinant of the Sylvester matrix. Coefficients are
/// lowest degree first.
pub fn sylvester(a: &[Rat], b: &[Rat]) -> Rat {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Rat::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rat::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

pub fn check_resultant(a: &[i64], b: &[i64]) -> Result<(), String> {
    let a: Vec<Rat> = a.iter().map(|&c| rat_int(c)).collect();
    let b: Vec<Rat> = b.iter().map(|&c| rat_int(c)).collect();
    let prs = subresultant_prs(&a, &b, &Rat::zero());
    let expected = sylvester(&a, &b);
    if prs.resultant == expected {
        Ok(())
    } else {
        Err(format!("PRS gives {}, Sylvester {}", prs.resultant, expected))
    }
}

/// Smallest vertex cover size by exhaustive search.
pub fn brute_force_cover(g: &DependencyGraph) -> usize {
    let n = g.len();
    let mut best = n;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let inside = |v: usize| mask >> v & 1 == 1;
        if g.nonlinear.iter().all(|&v| inside(v))
            && g.edges.iter().all(|&(a, b)| inside(a) || inside(b))
        {
            best = size;
        }
    }
    best
}

pub fn graph_from(n: usize, edges: &[(usize, usize)], nonlinear: &[usize]) -> DependencyGraph {
    let mut g = DependencyGraph::new((0..n).map(|i| format!("v{i}")).collect());
    for &(a, b) in edges {
        g.add_edge(a % n, b % n);
    }
    g.nonlinear = nonlinear.iter().map(|&v| v % n).collect();
    g
}

pub fn check_cover(g: &DependencyGraph) -> Result<(), String> {
    let cover = multistat::reduction::minimum_vertex_cover(g);
    if !g.is_cover(&cover) {
        return Err(format!("{cover:?} is not a cover"));
    }
    let best = brute_force_cover(g);
    if cover.len() != best {
        return Err(format!("cover of size {} but minimum is {best}", cover.len()));
    }
    Ok(())
}

/// Builds `prod (x - r) * (x^2 + q)` from distinct rational roots and
/// checks the positive-root isolation against the construction.
pub fn check_isolation(roots: &[(i64, i64)], q: i64) -> Result<(), String> {
    let mut rs: Vec<Rat> = roots.iter().map(|&(n, d)| rat(n, d.max(1))).collect();
    rs.sort();
    rs.dedup();
    let mut p = UniPoly::from_roots(&rs);
    if q > 0 {
        p = &p * &UniPoly::from_ints(&[q, 0, 1]);
    }
    let ivs = isolate_positive_roots(&p).map_err(|e| e.to_string())?;
    let positive: Vec<&Rat> = rs.iter().filter(|r| r.is_positive()).collect();
    if ivs.len() != positive.len() {
        return Err(format!("{} intervals for {} positive roots", ivs.len(), positive.len()));
    }
    let sf = p.squarefree().map_err(|e| e.to_string())?;
    let seq = SturmSequence::new(&sf).map_err(|e| e.to_string())?;
    for (k, iv) in ivs.iter().enumerate() {
        if k > 0 && ivs[k - 1].hi > iv.lo {
            return Err("intervals overlap or are unsorted".into());
        }
        if iv.lo.is_negative() {
            return Err("interval reaches below zero".into());
        }
        let inside: Vec<&&Rat> = positive.iter().filter(|r| iv.contains(r)).collect();
        if inside.len() != 1 {
            return Err(format!("interval [{}, {}] holds {} roots", iv.lo, iv.hi, inside.len()));
        }
        if !iv.is_exact() {
            let n = seq
                .count(&RealBound::Finite(iv.lo.clone()), &RealBound::Finite(iv.hi.clone()))
                .map_err(|e| e.to_string())?;
            if n != 1 {
                return Err(format!("Sturm count {n} on an isolating interval"));
            }
        }
    }
    Ok(())
}

pub fn check_hull(raw: &[(i64, i64, i64)]) -> Result<(), String> {
    let pts: Vec<Point3> = raw
        .iter()
        .map(|&(x, y, z)| [rat_int(x), rat_int(y), rat_int(z)])
        .collect();
    let hull = convex_hull_3d(&pts);
    for f in &hull.faces {
        for p in &pts {
            if orient3d(&pts[f[0]], &pts[f[1]], &pts[f[2]], p).is_positive() {
                return Err(format!("point outside face {f:?}"));
            }
        }
    }
    if hull.degenerate.is_none() {
        let v = hull.vertices().len();
        if hull.faces.len() != 2 * v - 4 {
            return Err(format!("{} faces for {v} vertices", hull.faces.len()));
        }
        let mut directed = BTreeSet::new();
        for f in &hull.faces {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                if !directed.insert((a, b)) {
                    return Err("edge used twice in the same direction".into());
                }
            }
        }
        if directed.iter().any(|&(a, b)| !directed.contains(&(b, a))) {
            return Err("hull surface is not closed".into());
        }
    }
    Ok(())
}

fn vars_uv() -> Vec<String> {
    vec!["u".to_string(), "v".to_string()]
}

/// A bivariate system with known solutions: `u = p(v)` over the roots
/// `b_j` of `prod (v - b_j)`, mixed by an invertible linear combination.
/// Returns the system and its number of solutions with `u, v > 0`.
pub fn constructed_system(
    p: &[i64],
    bs: &[i64],
    mix: (i64, i64),
) -> (MultiPoly, MultiPoly, usize) {
    let vars = vars_uv();
    let mut bs: Vec<i64> = bs.to_vec();
    bs.sort();
    bs.dedup();
    let pv = UniPoly::from_ints(p);
    let expected = bs
        .iter()
        .filter(|&&b| b > 0 && pv.eval(&rat_int(b)).is_positive())
        .count();
    let p_text: Vec<String> = p
        .iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { format!("({c})") } else { format!("({c})*v^{i}") })
        .collect();
    let f = parse_polynomial(&format!("u - ({})", p_text.join(" + ")), &vars).unwrap();
    let g_text: Vec<String> = bs.iter().map(|b| format!("(v - ({b}))")).collect();
    let g = parse_polynomial(&g_text.join("*"), &vars).unwrap();
    let (s, t) = mix;
    // [f, g] -> [f + s g, g + t (f + s g)], determinant 1.
    let f2 = f.checked_add(&g.scale(&rat_int(s))).unwrap();
    let g2 = g.checked_add(&f2.scale(&rat_int(t))).unwrap();
    (f2, g2, expected)
}

/// `prod (u - a_i)` and `prod (v - b_j)`: solutions form a grid.
pub fn grid_system(a: &[i64], b: &[i64]) -> (MultiPoly, MultiPoly, usize) {
    let vars = vars_uv();
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    a.dedup();
    b.sort();
    b.dedup();
    let f: Vec<String> = a.iter().map(|x| format!("(u - ({x}))")).collect();
    let g: Vec<String> = b.iter().map(|x| format!("(v - ({x}))")).collect();
    let expected = a.iter().filter(|&&x| x > 0).count() * b.iter().filter(|&&x| x > 0).count();
    (
        parse_polynomial(&f.join("*"), &vars).unwrap(),
        parse_polynomial(&g.join("*"), &vars).unwrap(),
        expected,
    )
}

/// Evaluates the elimination steps backwards at exact values of the cover
/// variables and parameters. `None` if a coefficient vanishes.
pub fn exact_back_substitution(
    red: &ReducedSystem,
    values: &BTreeMap<String, Rat>,
) -> Option<BTreeMap<String, Rat>> {
    let mut state = values.clone();
    for step in red.steps.iter().rev() {
        let c = step.c.evaluate(&state).ok()?;
        if c.is_zero() {
            return None;
        }
        let d = step.d.evaluate(&state).ok()?;
        state.insert(step.var.clone(), -d / c);
    }
    Some(state)
}

pub fn read_golden(name: &str, vars: &[String]) -> Vec<MultiPoly> {
    let path = format!("{}/tests/data/{name}_reduced.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_polynomial(l, vars).unwrap().canonical())
        .collect()
}

/// Sorted integer coefficients of a canonical polynomial.
pub fn coefficient_multiset(p: &MultiPoly) -> Vec<String> {
    let mut v: Vec<String> = p.terms().map(|(_, c)| c.to_string()).collect();
    v.sort();
    v
}
