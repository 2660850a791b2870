//! Seeded random programs.  Binders are always fresh, so generated syntax
//! is already resolved; variables at the leaves are drawn from the binders
//! in scope and from a small pool of free names.

use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frontend::Calculus;
use crate::syntax::{CompOption, CompResponse, CompTerm, Frame, MonoOption, MonoTerm, Name, Question, Spine};

/// Probability that an internal node carries copatterns.
const COPATTERN_BIAS: f64 = 0.3;
const MAX_COPATTERN_DEPTH: usize = 4;
const MAX_OPTIONS: usize = 3;

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    /// Maximum number of syntax nodes.
    pub size: usize,
    pub free_vars: Vec<Name>,
    pub free_covars: Vec<Name>,
    pub indices: Vec<Name>,
    pub calculus: Calculus,
}

impl GenConfig {
    pub fn new(calculus: Calculus, seed: u64, size: usize) -> Self {
        let names = |xs: &[&str]| xs.iter().map(|x| Name::from(*x)).collect();
        GenConfig {
            seed,
            size: size.max(1),
            free_vars: names(&["a", "b", "c"]),
            free_covars: names(&["k"]),
            indices: names(&["X", "Y", "Z"]),
            calculus,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig { seed, ..self.clone() }
    }
}

/// Seed of the `i`-th case of a run (splitmix64 of the run seed and `i`).
pub fn case_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct Gen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    next_binder: usize,
}

impl Gen {
    pub fn new(cfg: &GenConfig) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg: cfg.clone(),
            next_binder: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn binder(&mut self, base: &str) -> Name {
        self.next_binder += 1;
        Name::new(format!("{base}{}", self.next_binder))
    }

    fn index(&mut self) -> Name {
        self.cfg.indices.choose(&mut self.rng).expect("index pool is nonempty").clone()
    }

    fn variable(&mut self, scope: &[Name]) -> Name {
        if !scope.is_empty() && self.rng.gen_bool(0.6) {
            return scope.choose(&mut self.rng).expect("nonempty").clone();
        }
        self.cfg.free_vars.choose(&mut self.rng).expect("variable pool is nonempty").clone()
    }

    /// Splits `total` into `parts` positive sizes.
    fn split(&mut self, total: usize, parts: usize) -> Vec<usize> {
        let mut sizes = vec![1; parts];
        for _ in parts..total {
            let i = self.rng.gen_range(0..parts);
            sizes[i] += 1;
        }
        sizes
    }

    fn copattern_depth(&mut self) -> usize {
        self.rng.gen_range(0..=MAX_COPATTERN_DEPTH)
    }

    // Monolithic terms.

    pub fn mono(&mut self) -> Rc<MonoTerm> {
        let size = self.cfg.size;
        self.mono_term(size, &mut Vec::new())
    }

    pub fn mono_term(&mut self, budget: usize, scope: &mut Vec<Name>) -> Rc<MonoTerm> {
        if budget <= 1 {
            return MonoTerm::var(self.variable(scope));
        }
        if self.rng.gen_bool(COPATTERN_BIAS) {
            return self.mono_obj(budget - 1, scope);
        }
        match self.rng.gen_range(0..3) {
            0 if budget >= 3 => {
                let sizes = self.split(budget - 1, 2);
                let f = self.mono_term(sizes[0], scope);
                let n = self.mono_term(sizes[1], scope);
                MonoTerm::app(f, n)
            }
            1 => {
                let f = self.mono_term(budget - 1, scope);
                MonoTerm::dot(f)
            }
            _ => {
                let f = self.mono_term(budget - 1, scope);
                MonoTerm::idx(f, self.index())
            }
        }
    }

    /// A closed-scope term whose free variables come from `free`.
    pub fn mono_term_over(&mut self, budget: usize, free: &[Name]) -> Rc<MonoTerm> {
        let pool = std::mem::replace(&mut self.cfg.free_vars, free.to_vec());
        let m = self.mono_term(budget, &mut Vec::new());
        self.cfg.free_vars = pool;
        m
    }

    fn mono_obj(&mut self, budget: usize, scope: &mut Vec<Name>) -> Rc<MonoTerm> {
        let count = self.rng.gen_range(0..=MAX_OPTIONS.min(budget));
        if count == 0 {
            return MonoTerm::obj(Vec::new());
        }
        let sizes = self.split(budget, count);
        let options = sizes.into_iter().map(|n| self.mono_option(n, scope)).collect();
        MonoTerm::obj(options)
    }

    fn mono_option(&mut self, budget: usize, scope: &mut Vec<Name>) -> MonoOption {
        let mark = scope.len();
        let frames: Vec<Frame<Name>> = (0..self.copattern_depth())
            .map(|_| {
                if self.rng.gen_bool(0.5) {
                    let x = self.binder("x");
                    scope.push(x.clone());
                    Frame::Arg(x)
                } else {
                    Frame::Idx(self.index())
                }
            })
            .collect();
        let rhs = self.mono_term(budget, scope);
        scope.truncate(mark);
        MonoOption::new(Spine::from_frames(frames), rhs)
    }

    pub fn mono_question(&mut self, max_frames: usize, arg_size: usize) -> Question<Rc<MonoTerm>> {
        let len = self.rng.gen_range(0..=max_frames);
        let frames = (0..len)
            .map(|_| {
                if self.rng.gen_bool(0.5) {
                    let n = self.rng.gen_range(1..=arg_size.max(1));
                    Frame::Arg(self.mono_term(n, &mut Vec::new()))
                } else {
                    Frame::Idx(self.index())
                }
            })
            .collect();
        Spine::from_frames(frames)
    }

    // Compositional responses.

    pub fn comp(&mut self) -> Rc<CompResponse> {
        let size = self.cfg.size;
        self.comp_response(size, &mut Vec::new(), &mut Vec::new())
    }

    pub fn comp_response(&mut self, budget: usize, vars: &mut Vec<Name>, covars: &mut Vec<Name>) -> Rc<CompResponse> {
        if budget <= 2 {
            if self.rng.gen_bool(0.7) {
                return CompResponse::end();
            }
            let pool = if covars.is_empty() || self.rng.gen_bool(0.2) { &self.cfg.free_covars } else { &*covars };
            let k = pool.choose(&mut self.rng).expect("covariable pool is nonempty").clone();
            return CompResponse::splat(k);
        }
        let rest = if self.rng.gen_bool(0.6) { 1 } else { self.rng.gen_range(1..budget - 1) };
        let m = self.comp_term(budget - 1 - rest, vars, covars);
        let r = self.comp_response(rest, vars, covars);
        CompResponse::and_then(m, r)
    }

    pub fn comp_term(&mut self, budget: usize, vars: &mut Vec<Name>, covars: &mut Vec<Name>) -> Rc<CompTerm> {
        if budget <= 1 {
            return if self.rng.gen_bool(0.25) { CompTerm::raise() } else { CompTerm::var(self.variable(vars)) };
        }
        if budget >= 4 && self.rng.gen_bool(COPATTERN_BIAS) {
            let fallback = self.rng.gen_range(1..=(budget - 3));
            let o = self.comp_option(budget - 1 - fallback, vars, covars);
            let m = self.comp_term(fallback, vars, covars);
            return CompTerm::handle(o, m);
        }
        match self.rng.gen_range(0..4) {
            0 if budget >= 3 => {
                let sizes = self.split(budget - 1, 2);
                let f = self.comp_term(sizes[0], vars, covars);
                let n = self.comp_term(sizes[1], vars, covars);
                CompTerm::app(f, n)
            }
            1 => CompTerm::dot(self.comp_term(budget - 1, vars, covars)),
            2 => {
                let q = self.binder("k");
                covars.push(q.clone());
                let r = self.comp_response(budget - 1, vars, covars);
                covars.pop();
                CompTerm::capture(q, r)
            }
            _ => {
                let f = self.comp_term(budget - 1, vars, covars);
                CompTerm::idx(f, self.index())
            }
        }
    }

    /// An option of at most `budget` nodes (at least 2).
    pub fn comp_option(&mut self, budget: usize, vars: &mut Vec<Name>, covars: &mut Vec<Name>) -> Rc<CompOption> {
        let depth = self.copattern_depth().min(budget.saturating_sub(2));
        let mark = vars.len();
        let mut frames = Vec::with_capacity(depth);
        for _ in 0..depth {
            if self.rng.gen_bool(0.5) {
                let x = self.binder("x");
                vars.push(x.clone());
                frames.push(Frame::Arg(x));
            } else {
                frames.push(Frame::Idx(self.index()));
            }
        }
        let f = self.binder("f");
        vars.push(f.clone());
        let body = self.comp_term(budget - depth - 1, vars, covars);
        vars.truncate(mark);
        frames.into_iter().rev().fold(CompOption::done(f, body), |rest, frame| match frame {
            Frame::Arg(x) => CompOption::pop(x, rest),
            Frame::Idx(i) => CompOption::get(i, rest),
        })
    }

    pub fn comp_question(&mut self, max_frames: usize, arg_size: usize) -> Question<Rc<CompTerm>> {
        let len = self.rng.gen_range(0..=max_frames);
        let frames = (0..len)
            .map(|_| {
                if self.rng.gen_bool(0.5) {
                    let n = self.rng.gen_range(1..=arg_size.max(1));
                    Frame::Arg(self.comp_term(n, &mut Vec::new(), &mut Vec::new()))
                } else {
                    Frame::Idx(self.index())
                }
            })
            .collect();
        Spine::from_frames(frames)
    }
}

pub fn gen_mono(cfg: &GenConfig) -> Rc<MonoTerm> {
    Gen::new(cfg).mono()
}

pub fn gen_comp(cfg: &GenConfig) -> Rc<CompResponse> {
    Gen::new(cfg).comp()
}
