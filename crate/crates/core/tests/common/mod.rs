#![allow(dead_code)]

use multiroots::{FactoredSpec, Family, PrecisionContext, Scalar};

pub struct Example {
    pub name: &'static str,
    pub family: Family,
    pub roots: &'static [&'static str],
    pub multiplicities: &'static [u32],
    pub initial: &'static [&'static str],
    pub iterations: usize,
    /// Printed rows k = 1.. of the reference iterate tables.
    pub table: &'static [&'static [&'static str]],
}

pub const EXAMPLE_1: Example = Example {
    name: "example 1",
    family: Family::Algebraic,
    roots: &["-2", "1", "3"],
    multiplicities: &[2, 1, 3],
    initial: &["-3", "0.1", "4"],
    iterations: 4,
    table: &[
        &[
            "-1.99942363112391931",
            "1.03532819268537456",
            "3.03985932004689332",
        ],
        &[
            "-2.00000000143304088",
            "0.999961906975802837",
            "2.99999539984403290",
        ],
        &[
            "-2.000000000000000000",
            "1.00000000000000501",
            "3.00000000000000007",
        ],
        &[
            "-2.000000000000000000",
            "1.00000000000000000",
            "3.00000000000000000",
        ],
    ],
};

pub const EXAMPLE_2: Example = Example {
    name: "example 2",
    family: Family::Trigonometric,
    roots: &["1", "2", "2.5"],
    multiplicities: &[3, 2, 1],
    initial: &["0.2", "1.7", "3"],
    iterations: 5,
    table: &[
        &[
            "1.08093197781206681",
            "2.13081574593339511",
            "2.68530050098035859",
        ],
        &[
            "0.999087999636487434",
            "1.98917328088624173",
            "2.46587439388854078",
        ],
        &[
            "1.00000001182848523",
            "2.00000867262537340",
            "2.50012119040535689",
        ],
        &[
            "1.000000000000000000",
            "1.99999999999998133",
            "2.4999999999981136",
        ],
        &[
            "1.000000000000000000",
            "2.000000000000000000",
            "2.500000000000000000",
        ],
    ],
};

pub const EXAMPLE_3: Example = Example {
    name: "example 3",
    family: Family::Exponential,
    roots: &["-2", "3"],
    multiplicities: &[2, 2],
    initial: &["-1", "4"],
    iterations: 4,
    table: &[
        &["-1.93448948248966207", "3.07207901269406155"],
        &["-1.99997875689833755", "3.00002895806496640"],
        &["-1.99999999999999929", "3.000000000000000190"],
        &["-2.000000000000000000", "3.000000000000000000"],
    ],
};

pub fn ctx30() -> PrecisionContext {
    PrecisionContext::new(30).unwrap()
}

pub fn scalars(ctx: &PrecisionContext, texts: &[&str]) -> Vec<Scalar> {
    texts.iter().map(|t| ctx.parse(t).unwrap()).collect()
}

impl Example {
    pub fn spec(&self, ctx: &PrecisionContext) -> FactoredSpec {
        FactoredSpec::new(
            self.family,
            scalars(ctx, self.roots),
            self.multiplicities.to_vec(),
            ctx.one(),
        )
        .unwrap()
    }

    pub fn problem_path(&self) -> std::path::PathBuf {
        let file = match self.family {
            Family::Algebraic => "example1.json",
            Family::Trigonometric => "example2.json",
            Family::Exponential => "example3.json",
        };
        std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("problems")
            .join(file)
    }
}

pub mod expansion {
    use multiroots::polynomials::eval_factored;
    use multiroots::{
        expand_factored, FactoredSpec, Family, Polynomial, PrecisionContext, RootFunction, Scalar,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub const SPECS_PER_FAMILY: usize = 100;
    pub const POINTS_PER_SPEC: usize = 100;

    /// Roots in [-3, 3] pairwise at least 0.5 apart, m <= 4, multiplicities <= 3.
    /// For the trigonometric family this keeps the roots inside an interval
    /// shorter than 2 pi.
    pub fn random_spec(
        rng: &mut ChaCha8Rng,
        family: Family,
        ctx: &PrecisionContext,
    ) -> FactoredSpec {
        loop {
            let m = rng.gen_range(1..=4);
            let mut roots: Vec<f64> = Vec::with_capacity(m);
            while roots.len() < m {
                let r = (rng.gen_range(-3.0..=3.0) * 64.0_f64).round() / 64.0;
                if roots.iter().all(|x| (x - r).abs() >= 0.5) {
                    roots.push(r);
                }
            }
            let mults: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
            let total: u32 = mults.iter().sum();
            if family != Family::Algebraic && total % 2 == 1 {
                continue;
            }
            let scale = ctx.from_f64((rng.gen_range(0.25..4.0) * 16.0_f64).round() / 16.0);
            let roots = roots.iter().map(|&r| ctx.from_f64(r)).collect();
            return FactoredSpec::new(family, roots, mults, scale).unwrap();
        }
    }

    /// Sums of absolute term magnitudes for the value and the derivative of
    /// the coefficient form at `x`: the size that rounding errors scale with.
    pub fn evaluation_scale(poly: &Polynomial, x: &Scalar) -> (Scalar, Scalar) {
        match poly {
            Polynomial::Algebraic(p) => {
                let ax = x.abs();
                let n = p.degree();
                let mut value = x.int_like(0);
                let mut deriv = x.int_like(0);
                for (i, c) in p.coeffs().iter().enumerate() {
                    let k = (n - i) as i32;
                    value = &value + &(&c.abs() * &ax.powi(k));
                    if k > 0 {
                        deriv = &deriv + &(&c.abs() * &ax.powi(k - 1).mul_int(k as i64));
                    }
                }
                (value, deriv)
            }
            Polynomial::Trigonometric(t) => {
                let mut value = t.a0().abs().half();
                let mut deriv = x.int_like(0);
                for (l, (a, b)) in t.a().iter().zip(t.b()).enumerate() {
                    let s = &a.abs() + &b.abs();
                    value = &value + &s;
                    deriv = &deriv + &s.mul_int(l as i64 + 1);
                }
                (value, deriv)
            }
            Polynomial::Exponential(e) => {
                let mut value = e.a0().abs().half();
                let mut deriv = x.int_like(0);
                for (l, (a, b)) in e.a().iter().zip(e.b()).enumerate() {
                    let lx = x.mul_int(l as i64 + 1);
                    let (ch, sh) = (lx.cosh(), lx.sinh().abs());
                    value = &value + &(&(&a.abs() * &ch) + &(&b.abs() * &sh));
                    deriv = &deriv + &(&(&a.abs() * &sh) + &(&b.abs() * &ch)).mul_int(l as i64 + 1);
                }
                (value, deriv)
            }
        }
    }

    #[derive(Debug, Default, Clone, Copy)]
    pub struct Stats {
        /// Largest `|expanded - factored| / |factored|`.
        pub worst_relative: f64,
        /// Largest disagreement divided by the evaluation scale.
        pub worst_scaled: f64,
        /// Evaluation scale over `|factored|` at the worst relative point.
        pub kappa_at_worst: f64,
        pub comparisons: usize,
    }

    fn ratio(num: &Scalar, den: &Scalar) -> f64 {
        if num.is_zero() {
            0.0
        } else {
            (num / den).to_f64()
        }
    }

    /// Compares value and derivative of `expand_factored(spec)` with the
    /// factored form over random specs and points in [-3.5, 3.5].
    pub fn run(family: Family, seed: u64) -> Stats {
        let ctx = PrecisionContext::new(30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stats = Stats::default();
        for _ in 0..SPECS_PER_FAMILY {
            let spec = random_spec(&mut rng, family, &ctx);
            let poly = expand_factored(&spec).unwrap();
            // the algebraic expansion is monic
            let factor = match family {
                Family::Algebraic => spec.scale().clone(),
                _ => ctx.one(),
            };
            for _ in 0..POINTS_PER_SPEC {
                let x = ctx.from_f64(rng.gen_range(-3.5..3.5));
                let (v, dv) = poly.eval_with_derivative(&x);
                let (fv, fdv) = eval_factored(&spec, &x);
                let (m, dm) = evaluation_scale(&poly, &x);
                for (got, want, scale) in [
                    (&v * &factor, fv, &m * &factor.abs()),
                    (&dv * &factor, fdv, &dm * &factor.abs()),
                ] {
                    let diff = (&got - &want).abs();
                    let relative = ratio(&diff, &want.abs());
                    stats.worst_scaled = stats.worst_scaled.max(ratio(&diff, &scale));
                    if relative > stats.worst_relative {
                        stats.worst_relative = relative;
                        stats.kappa_at_worst = ratio(&scale, &want.abs());
                    }
                    stats.comparisons += 1;
                }
            }
        }
        stats
    }
}
