//! Sufficient convergence conditions for the three families.
//!
//! Given the exact roots, their multiplicities and candidate constants
//! `(c, q[, xi])`, each checker evaluates every inequality of the
//! corresponding convergence theorem as printed and reports both sides.
//! When all hold, starting values with `|x_i^[0] - x_i| <= c q` converge
//! with `|x_i^[k] - x_i| <= c q^(3^k)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::numeric::Scalar;
use crate::polynomials::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    /// Algebraic polynomials.
    T1,
    /// Trigonometric polynomials.
    T2,
    /// Exponential polynomials.
    T3,
}

impl Theorem {
    pub fn for_family(family: Family) -> Self {
        match family {
            Family::Algebraic => Theorem::T1,
            Family::Trigonometric => Theorem::T2,
            Family::Exponential => Theorem::T3,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Theorem::T1 => 1,
            Theorem::T2 => 2,
            Theorem::T3 => 3,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theorem {}", self.number())
    }
}

/// One inequality `lhs < rhs` with both sides evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityRow {
    pub label: String,
    /// Zero-based root index for per-root inequalities.
    pub root: Option<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub passed: bool,
}

impl InequalityRow {
    fn strict(label: impl Into<String>, root: Option<usize>, lhs: Scalar, rhs: Scalar) -> Self {
        let passed = lhs < rhs;
        Self {
            label: label.into(),
            root,
            lhs,
            rhs,
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theorem: Theorem,
    /// False for a single root, where the minimum gap is undefined.
    pub applicable: bool,
    /// Minimum pairwise gap of the exact roots.
    pub d: Option<Scalar>,
    pub c: Scalar,
    pub q: Scalar,
    pub xi: Option<Scalar>,
    pub derived_constants: BTreeMap<String, Scalar>,
    pub rows: Vec<InequalityRow>,
    pub satisfied: bool,
    /// `c * q`.
    pub initial_ball_radius: Scalar,
    pub notes: Vec<&'static str>,
}

/// Feasible constants found by [`find_constants`].
#[derive(Debug, Clone, PartialEq)]
pub struct Constants {
    pub c: Scalar,
    pub q: Scalar,
    pub xi: Option<Scalar>,
}

impl Constants {
    pub fn ball_radius(&self) -> Scalar {
        &self.c * &self.q
    }
}

/// Smallest `|x_i - x_j|` over distinct pairs; `None` for fewer than two roots.
pub fn min_gap(roots: &[Scalar]) -> Option<Scalar> {
    pairwise_gaps(roots).reduce(|a, b| a.min(&b).clone())
}

fn max_gap(roots: &[Scalar]) -> Option<Scalar> {
    pairwise_gaps(roots).reduce(|a, b| a.max(&b).clone())
}

fn pairwise_gaps(roots: &[Scalar]) -> impl Iterator<Item = Scalar> + '_ {
    roots
        .iter()
        .enumerate()
        .flat_map(move |(i, a)| roots[i + 1..].iter().map(move |b| (a - b).abs()))
}

struct Frame {
    d: Scalar,
    zero: Scalar,
}

fn start_report(
    theorem: Theorem,
    roots: &[Scalar],
    c: &Scalar,
    q: &Scalar,
    xi: Option<&Scalar>,
) -> (TheoremReport, Option<Frame>) {
    let d = min_gap(roots);
    let report = TheoremReport {
        theorem,
        applicable: d.is_some(),
        d: d.clone(),
        c: c.clone(),
        q: q.clone(),
        xi: xi.cloned(),
        derived_constants: BTreeMap::new(),
        rows: Vec::new(),
        satisfied: false,
        initial_ball_radius: c * q,
        notes: Vec::new(),
    };
    let frame = d.map(|d| Frame {
        zero: c.int_like(0),
        d,
    });
    (report, frame)
}

fn finish(mut report: TheoremReport) -> TheoremReport {
    if !report.applicable {
        report
            .notes
            .push("a single root leaves the minimum gap d undefined");
    }
    report.satisfied = report.applicable && report.rows.iter().all(|r| r.passed);
    report
}

fn common_rows(frame: &Frame, c: &Scalar, q: &Scalar) -> Vec<InequalityRow> {
    let one = q.int_like(1);
    vec![
        InequalityRow::strict("0 < q", None, frame.zero.clone(), q.clone()),
        InequalityRow::strict("q < 1", None, q.clone(), one),
        InequalityRow::strict("0 < c", None, frame.zero.clone(), c.clone()),
        InequalityRow::strict(
            "0 < d - 2c",
            None,
            frame.zero.clone(),
            &frame.d - &c.mul_int(2),
        ),
    ]
}

/// Conditions for algebraic polynomials:
/// `0 < c^2 (n - 3 a_i) + (n + (3d - 1) a_i) c < d^2 a_i` for every root.
pub fn check_theorem1(
    roots: &[Scalar],
    multiplicities: &[u32],
    n: u32,
    c: &Scalar,
    q: &Scalar,
) -> TheoremReport {
    let (mut report, frame) = start_report(Theorem::T1, roots, c, q, None);
    let Some(frame) = frame else {
        return finish(report);
    };
    report.rows = common_rows(&frame, c, q);
    let n_s = c.int_like(n as i64);
    let c2 = c * c;
    let d2 = &frame.d * &frame.d;
    let three_d_minus_one = &frame.d.mul_int(3) - &c.int_like(1);
    for (i, &alpha) in multiplicities.iter().enumerate() {
        let a = alpha as i64;
        let middle =
            &(&c2 * &(&n_s - &c.int_like(3 * a))) + &(&(&n_s + &three_d_minus_one.mul_int(a)) * c);
        report.rows.push(InequalityRow::strict(
            format!("root {} lower: 0 < c^2(n - 3a) + (n + (3d - 1)a)c", i + 1),
            Some(i),
            frame.zero.clone(),
            middle.clone(),
        ));
        report.rows.push(InequalityRow::strict(
            format!(
                "root {} upper: c^2(n - 3a) + (n + (3d - 1)a)c < d^2 a",
                i + 1
            ),
            Some(i),
            middle,
            d2.mul_int(a),
        ));
    }
    report
        .notes
        .push("the term (3d - 1) mixes a length with a pure number; evaluated as printed");
    finish(report)
}

/// Conditions for trigonometric polynomials of degree `n`, with
/// `A = min(|sin(xi/2)|, |sin(d/2 - c)|)`:
/// `2c < xi`, `max gap < 2 pi - 2 xi` and
/// `c^2 (4n + a_i (9A^2/8 - 2)) < A^2 a_i` for every root.
pub fn check_theorem2(
    roots: &[Scalar],
    multiplicities: &[u32],
    n: u32,
    c: &Scalar,
    q: &Scalar,
    xi: &Scalar,
) -> TheoremReport {
    let (mut report, frame) = start_report(Theorem::T2, roots, c, q, Some(xi));
    let Some(frame) = frame else {
        return finish(report);
    };
    report.rows = common_rows(&frame, c, q);
    let two_pi = c.pi_like().mul_int(2);
    report.rows.push(InequalityRow::strict(
        "0 < xi",
        None,
        frame.zero.clone(),
        xi.clone(),
    ));
    report.rows.push(InequalityRow::strict(
        "2c < xi",
        None,
        c.mul_int(2),
        xi.clone(),
    ));
    let spread = max_gap(roots).unwrap_or_else(|| frame.zero.clone());
    report.rows.push(InequalityRow::strict(
        "max |x_i - x_j| < 2 pi - 2 xi",
        None,
        spread,
        &two_pi - &xi.mul_int(2),
    ));

    let a_const = xi.half().sin().abs();
    let a_other = (&frame.d.half() - c).sin().abs();
    let a = a_const.min(&a_other).clone();
    report.derived_constants.insert("A".into(), a.clone());
    report.derived_constants.insert("xi".into(), xi.clone());

    let a2 = &a * &a;
    let c2 = c * c;
    let four_n = c.int_like(4 * n as i64);
    let nine_a2_over_8 = &a2.mul_int(9) / &c.int_like(8);
    let bracket = &nine_a2_over_8 - &c.int_like(2);
    for (i, &alpha) in multiplicities.iter().enumerate() {
        let al = alpha as i64;
        let lhs = &c2 * &(&four_n + &bracket.mul_int(al));
        report.rows.push(InequalityRow::strict(
            format!("root {}: c^2(4n + a(9A^2/8 - 2)) < A^2 a", i + 1),
            Some(i),
            lhs,
            a2.mul_int(al),
        ));
    }
    report.notes.push("the constant 9A^2/8 is taken as printed");
    finish(report)
}

/// Conditions for exponential polynomials of degree `n`, with
/// `s = sinh((d - 2c)/2)`: `ch(c/2)/2 + c|sh(c/2)|/8 < 6`, `ch(c/2) < 2` and
/// `c^2 (4n + (s^2 - 2) a_i) < s^2 a_i` for every root.
pub fn check_theorem3(
    roots: &[Scalar],
    multiplicities: &[u32],
    n: u32,
    c: &Scalar,
    q: &Scalar,
) -> TheoremReport {
    let (mut report, frame) = start_report(Theorem::T3, roots, c, q, None);
    let Some(frame) = frame else {
        return finish(report);
    };
    report.rows = common_rows(&frame, c, q);
    let half_c = c.half();
    let (ch, sh) = (half_c.cosh(), half_c.sinh());
    let taylor = &ch.half() + &(&(c * &sh.abs()) / &c.int_like(8));
    report.rows.push(InequalityRow::strict(
        "ch(c/2)/2 + c|sh(c/2)|/8 < 6",
        None,
        taylor,
        c.int_like(6),
    ));
    report.rows.push(InequalityRow::strict(
        "ch(c/2) < 2",
        None,
        ch,
        c.int_like(2),
    ));

    let s = (&frame.d - &c.mul_int(2)).half().sinh();
    report.derived_constants.insert("s".into(), s.clone());
    let s2 = &s * &s;
    let c2 = c * c;
    let four_n = c.int_like(4 * n as i64);
    let s2_minus_2 = &s2 - &c.int_like(2);
    for (i, &alpha) in multiplicities.iter().enumerate() {
        let al = alpha as i64;
        let lhs = &c2 * &(&four_n + &s2_minus_2.mul_int(al));
        report.rows.push(InequalityRow::strict(
            format!("root {}: c^2(4n + (s^2 - 2)a) < s^2 a", i + 1),
            Some(i),
            lhs,
            s2.mul_int(al),
        ));
    }
    report
        .notes
        .push("the per-root condition is printed with S; evaluated with S = s = sh((d - 2c)/2)");
    report
        .notes
        .push("the bound 6 on ch(c/2)/2 + c|sh(c/2)|/8 is taken as printed");
    finish(report)
}

/// Dispatches to the checker for `theorem`; `xi` is only used by theorem 2
/// and must be supplied for it.
pub fn check(
    theorem: Theorem,
    roots: &[Scalar],
    multiplicities: &[u32],
    n: u32,
    constants: &Constants,
) -> Option<TheoremReport> {
    let Constants { c, q, xi } = constants;
    Some(match theorem {
        Theorem::T1 => check_theorem1(roots, multiplicities, n, c, q),
        Theorem::T2 => check_theorem2(roots, multiplicities, n, c, q, xi.as_ref()?),
        Theorem::T3 => check_theorem3(roots, multiplicities, n, c, q),
    })
}

/// Flags each root whose starting value lies in the closed ball of radius `c q`.
pub fn verify_initial_ball(
    initials: &[Scalar],
    roots: &[Scalar],
    c: &Scalar,
    q: &Scalar,
) -> Vec<bool> {
    let radius = c * q;
    initials
        .iter()
        .zip(roots)
        .map(|(x0, r)| (x0 - r).abs() <= radius)
        .collect()
}

const LOG_POINTS: usize = 64;
const LINEAR_POINTS: usize = 64;
const XI_POINTS: usize = 32;
/// The logarithmic part of the `c` grid spans this many decades below `d/2`.
const LOG_DECADES: i64 = 6;

fn c_grid(half_d: &Scalar) -> Vec<Scalar> {
    let mut grid = Vec::with_capacity(LOG_POINTS + LINEAR_POINTS);
    let ten = half_d.int_like(10);
    for k in 0..LOG_POINTS as i64 {
        // exponent runs from -6 up to -6/64, staying strictly below d/2
        let exponent = &half_d.int_like(-LOG_DECADES * (LOG_POINTS as i64 - k))
            / &half_d.int_like(LOG_POINTS as i64);
        grid.push(half_d * &(&exponent * &ten.ln()).exp());
    }
    for k in 1..=LINEAR_POINTS as i64 {
        grid.push(&half_d.mul_int(k) / &half_d.int_like(LINEAR_POINTS as i64 + 1));
    }
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    grid
}

/// Grid search for constants satisfying the theorem, maximizing the ball
/// radius `c q`; ties go to the smaller `c`, then the smaller `q`.
///
/// `c` ranges over 64 logarithmic and 64 linear points in `(0, d/2)`, `q` over
/// `0.1, ..., 0.9` and, for theorem 2, `xi` over 32 points in `(2c, pi)`.
pub fn find_constants(
    theorem: Theorem,
    roots: &[Scalar],
    multiplicities: &[u32],
    n: u32,
) -> Option<Constants> {
    let d = min_gap(roots)?;
    let half_d = d.half();
    let qs: Vec<Scalar> = (1..=9).map(|k| &d.int_like(k) / &d.int_like(10)).collect();
    let pi = d.pi_like();
    let mut best: Option<Constants> = None;
    for c in c_grid(&half_d) {
        for q in &qs {
            let candidate_radius = &c * q;
            if let Some(b) = &best {
                // strict improvement only; the grid is visited in ascending c and q
                if candidate_radius <= b.ball_radius() {
                    continue;
                }
            }
            let feasible = match theorem {
                Theorem::T1 => check_theorem1(roots, multiplicities, n, &c, q)
                    .satisfied
                    .then_some(None),
                Theorem::T3 => check_theorem3(roots, multiplicities, n, &c, q)
                    .satisfied
                    .then_some(None),
                Theorem::T2 => {
                    let two_c = c.mul_int(2);
                    if two_c >= pi {
                        None
                    } else {
                        (1..=XI_POINTS as i64)
                            .map(|k| {
                                &two_c
                                    + &(&(&pi - &two_c).mul_int(k)
                                        / &d.int_like(XI_POINTS as i64 + 1))
                            })
                            .find(|xi| {
                                check_theorem2(roots, multiplicities, n, &c, q, xi).satisfied
                            })
                            .map(Some)
                    }
                }
            };
            if let Some(xi) = feasible {
                best = Some(Constants {
                    c: c.clone(),
                    q: q.clone(),
                    xi,
                });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::PrecisionContext;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30).unwrap()
    }

    fn parse_all(ctx: &PrecisionContext, v: &[&str]) -> Vec<Scalar> {
        v.iter().map(|s| ctx.parse(s).unwrap()).collect()
    }

    fn row<'a>(report: &'a TheoremReport, prefix: &str) -> &'a InequalityRow {
        report
            .rows
            .iter()
            .find(|r| r.label.starts_with(prefix))
            .unwrap_or_else(|| panic!("no row {prefix}"))
    }

    #[test]
    fn theorem1_example_one() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["-2", "1", "3"]);
        let p = |s| ctx.parse(s).unwrap();
        let ok = check_theorem1(&roots, &[2, 1, 3], 6, &p("0.3"), &p("0.5"));
        assert!(ok.satisfied);
        assert_eq!(ok.d, Some(ctx.int(2)));
        let simple = row(&ok, "root 2 upper");
        assert!((simple.lhs.to_f64() - 3.57).abs() < 1e-12);
        assert_eq!(simple.rhs, ctx.int(4));

        let bad = check_theorem1(&roots, &[2, 1, 3], 6, &p("0.4"), &p("0.5"));
        assert!(!bad.satisfied);
        let simple = row(&bad, "root 2 upper");
        assert!((simple.lhs.to_f64() - 4.88).abs() < 1e-12);
        assert!(!simple.passed);

        let q_one = check_theorem1(&roots, &[2, 1, 3], 6, &p("0.3"), &p("1"));
        assert!(!q_one.satisfied);
        assert!(!row(&q_one, "q < 1").passed);
    }

    #[test]
    fn theorem2_example_two() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["1", "2", "2.5"]);
        let p = |s| ctx.parse(s).unwrap();
        let ok = check_theorem2(&roots, &[3, 2, 1], 3, &p("0.05"), &p("0.5"), &p("2"));
        assert!(ok.satisfied, "{ok:#?}");
        assert!((ok.derived_constants["A"].to_f64() - 0.2f64.sin()).abs() < 1e-15);
        let simple = row(&ok, "root 3");
        assert!((simple.lhs.to_f64() - 0.02511).abs() < 1e-5);
        assert!((simple.rhs.to_f64() - 0.03947).abs() < 1e-5);

        let narrow = check_theorem2(&roots, &[3, 2, 1], 3, &p("0.05"), &p("0.5"), &p("0.05"));
        assert!(!narrow.satisfied);
        assert!(!row(&narrow, "2c < xi").passed);

        let spread = parse_all(&ctx, &["0", "1", "5.5"]);
        let wide = check_theorem2(&spread, &[2, 2, 2], 3, &p("0.05"), &p("0.5"), &p("0.5"));
        assert!(!wide.satisfied);
        assert!(!row(&wide, "max |x_i - x_j|").passed);
    }

    #[test]
    fn theorem3_example_three() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["-2", "3"]);
        let p = |s| ctx.parse(s).unwrap();
        let ok = check_theorem3(&roots, &[2, 2], 2, &p("0.5"), &p("0.5"));
        assert!(ok.satisfied);
        assert!((ok.derived_constants["s"].to_f64() - 2f64.sinh()).abs() < 1e-14);
        let r = row(&ok, "root 1");
        assert!((r.lhs.to_f64() - 7.577).abs() < 1e-2);
        assert!((r.rhs.to_f64() - 26.31).abs() < 1e-2);

        let touching = check_theorem3(&roots, &[2, 2], 2, &p("2.5"), &p("0.5"));
        assert!(!touching.satisfied);
        assert!(!row(&touching, "0 < d - 2c").passed);
        let zero_c = check_theorem3(&roots, &[2, 2], 2, &ctx.zero(), &p("0.5"));
        assert!(!zero_c.satisfied);
        assert!(!row(&zero_c, "0 < c").passed);
    }

    #[test]
    fn single_root_is_not_applicable() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["1"]);
        let p = |s| ctx.parse(s).unwrap();
        let report = check_theorem1(&roots, &[4], 4, &p("0.1"), &p("0.5"));
        assert!(!report.applicable);
        assert!(!report.satisfied);
        assert!(report.d.is_none());
        assert!(find_constants(Theorem::T1, &roots, &[4], 4).is_none());
    }

    #[test]
    fn report_satisfaction_follows_from_rows() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["-2", "1", "3"]);
        for c in ["0.01", "0.2", "0.3", "0.35", "0.9"] {
            let r = check_theorem1(
                &roots,
                &[2, 1, 3],
                6,
                &ctx.parse(c).unwrap(),
                &ctx.parse("0.5").unwrap(),
            );
            assert_eq!(r.satisfied, r.rows.iter().all(|row| row.passed));
            assert_eq!(r.rows.len(), 4 + 2 * 3);
        }
    }

    #[test]
    fn min_gap_is_permutation_invariant() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["0.5", "-1", "3", "0.75"]);
        let mut reversed = roots.clone();
        reversed.reverse();
        assert_eq!(min_gap(&roots), Some(ctx.parse("0.25").unwrap()));
        assert_eq!(min_gap(&roots), min_gap(&reversed));
    }

    #[test]
    fn search_finds_constants_for_every_example() {
        let ctx = ctx();
        let t1 = find_constants(
            Theorem::T1,
            &parse_all(&ctx, &["-2", "1", "3"]),
            &[2, 1, 3],
            6,
        )
        .unwrap();
        assert!(t1.c.to_f64() >= 0.3, "{t1:?}");
        let t2 = find_constants(
            Theorem::T2,
            &parse_all(&ctx, &["1", "2", "2.5"]),
            &[3, 2, 1],
            3,
        )
        .unwrap();
        assert!(t2.xi.is_some());
        let t3 = find_constants(Theorem::T3, &parse_all(&ctx, &["-2", "3"]), &[2, 2], 2).unwrap();
        assert!(t3.c.to_f64() > 0.0);
    }

    #[test]
    fn inflated_multiplicities_leave_nothing_feasible() {
        let ctx = ctx();
        // simple roots 1e-3 apart next to a huge cluster: c < d^2 / n falls below the grid
        let roots = parse_all(&ctx, &["0", "0.001", "5"]);
        assert!(find_constants(Theorem::T1, &roots, &[1, 1, 5000], 5002).is_none());
    }

    #[test]
    fn ball_membership_is_closed() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["-2", "1", "3"]);
        let c = ctx.parse("0.3").unwrap();
        let q = ctx.parse("0.5").unwrap();
        assert_eq!(verify_initial_ball(&roots, &roots, &c, &q), vec![true; 3]);
        let example_start = parse_all(&ctx, &["-3", "0.1", "4"]);
        assert_eq!(
            verify_initial_ball(&example_start, &roots, &c, &q),
            vec![false; 3]
        );
        let edge = vec![&roots[0] + &(&c * &q), roots[1].clone(), roots[2].clone()];
        assert_eq!(verify_initial_ball(&edge, &roots, &c, &q), vec![true; 3]);
    }
}
