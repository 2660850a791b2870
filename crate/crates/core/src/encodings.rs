//! Translations into the compositional calculus: desugaring monolithic
//! programs, and the `object`/`compose` encodings of vertically composed
//! cases.

use std::rc::Rc;

use crate::frontend::OPEN;
use crate::syntax::comp::{all_names_option, all_names_term, freshen_option, freshen_term};
use crate::syntax::{CompOption, CompTerm, Frame, Fresh, MonoOption, MonoTerm, Name, WILDCARD};

#[derive(Clone, Debug)]
pub struct DesugarReport {
    pub input: Rc<MonoTerm>,
    pub output: Rc<CompTerm>,
    /// Number of options turned into handler chains.
    pub option_count: usize,
    /// Some option has a non-empty copattern.  Where the monolithic
    /// program would stop with `under`, the desugared one falls through
    /// to the next option instead.
    pub may_under: bool,
}

struct Desugarer {
    option_count: usize,
    may_under: bool,
}

impl Desugarer {
    fn term(&mut self, m: &MonoTerm) -> Rc<CompTerm> {
        match m {
            MonoTerm::Var(x) => CompTerm::var(x.clone()),
            MonoTerm::App(f, n) => CompTerm::app(self.term(f), self.term(n)),
            MonoTerm::Idx(f, i) => CompTerm::idx(self.term(f), i.clone()),
            MonoTerm::Dot(f) => CompTerm::dot(self.term(f)),
            // λ{O₁ | … | Oₙ} = O₁ ? (… ? (Oₙ ? raise))
            MonoTerm::Obj(os) => os
                .iter()
                .rev()
                .fold(CompTerm::raise(), |rest, o| CompTerm::handle(self.option(o), rest)),
        }
    }

    fn option(&mut self, o: &MonoOption) -> Rc<CompOption> {
        self.option_count += 1;
        self.may_under |= !o.lhs.is_nop();
        let frames: Vec<&Frame<Name>> = o.lhs.iter().collect();
        // (x L) -> O = x -> (L -> O), and ε -> M = ? _ -> M
        frames
            .into_iter()
            .rev()
            .fold(CompOption::done(WILDCARD, self.term(&o.rhs)), |rest, f| match f {
                Frame::Arg(x) => CompOption::pop(x.clone(), rest),
                Frame::Idx(i) => CompOption::get(i.clone(), rest),
            })
    }
}

pub fn desugar(m: &Rc<MonoTerm>) -> DesugarReport {
    let mut d = Desugarer { option_count: 0, may_under: false };
    let output = d.term(m);
    DesugarReport {
        input: m.clone(),
        output,
        option_count: d.option_count,
        may_under: d.may_under,
    }
}

fn chain(os: &[Rc<CompOption>], last: Rc<CompTerm>) -> Rc<CompTerm> {
    os.iter().rev().fold(last, |rest, o| CompTerm::handle(o.clone(), rest))
}

/// `object{O₁ | … | Oₙ} = λ{O₁ | … | Oₙ | self Open -> λ{x -> O₁ ? … ? Oₙ ? x}}`
/// in compositional form.  The options are copied, so each copy gets fresh
/// binders.  `Open` must not be used by the options.
pub fn object_enc_chain(os: &[Rc<CompOption>]) -> Rc<CompTerm> {
    let mut fresh = Fresh::avoiding(os.iter().flat_map(|o| all_names_option(o)).collect::<Vec<_>>().iter());
    let copy: Vec<Rc<CompOption>> = os.iter().map(|o| freshen_option(o, &mut fresh)).collect();
    let x = fresh.next_name(&Name::from("x"));
    let extend = CompOption::pop(x.clone(), CompOption::done(WILDCARD, chain(&copy, CompTerm::var(x))));
    let self_name = fresh.next_name(&Name::from("self"));
    let open = CompOption::pop(
        self_name,
        CompOption::get(OPEN, CompOption::done(WILDCARD, CompTerm::handle(extend, CompTerm::raise()))),
    );
    let mut all = os.to_vec();
    all.push(open);
    chain(&all, CompTerm::raise())
}

/// Whether `o` responds to the `Open` method call `self · Open · …` that
/// `compose` sends.  Such an option is a catch-all after at most the self
/// argument, and it shadows the extension method: vertical composition
/// only behaves as chaining for options where this is false.
pub fn answers_open(o: &CompOption) -> bool {
    match o {
        CompOption::Done(..) => true,
        CompOption::PopArg(_, rest) => matches!(**rest, CompOption::Done(..)),
        CompOption::GetIdx(..) => false,
    }
}

pub fn object_enc(o: &Rc<CompOption>) -> Rc<CompTerm> {
    object_enc_chain(std::slice::from_ref(o))
}

/// `o.Open`, the handler-extension method of an encoded object.
fn open(o: Rc<CompTerm>) -> Rc<CompTerm> {
    CompTerm::idx(CompTerm::dot(o), OPEN)
}

/// `compose = λ o o' -> object{? x -> o.Open (o'.Open x)}`.
pub fn compose_term() -> Rc<CompTerm> {
    let (o, o2, x) = (Name::from("o"), Name::from("o'"), Name::from("x"));
    let body = CompTerm::app(open(CompTerm::var(o.clone())), CompTerm::app(open(CompTerm::var(o2.clone())), CompTerm::var(x.clone())));
    let object = object_enc(&CompOption::done(x, body));
    let lam = CompOption::pop(o, CompOption::pop(o2, CompOption::done(WILDCARD, object)));
    CompTerm::handle(lam, CompTerm::raise())
}

/// `compose m₁ m₂`.  The arguments are renamed apart from the binders of
/// `compose`.
pub fn compose_enc(m1: &Rc<CompTerm>, m2: &Rc<CompTerm>) -> Rc<CompTerm> {
    let compose = compose_term();
    let mut names = all_names_term(&compose);
    names.extend(all_names_term(m1));
    names.extend(all_names_term(m2));
    let mut fresh = Fresh::avoiding(names.iter());
    let m1 = freshen_term(m1, &mut fresh);
    let m2 = freshen_term(m2, &mut fresh);
    CompTerm::app(CompTerm::app(compose, m1), m2)
}
