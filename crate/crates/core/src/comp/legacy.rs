//! Option matching in the original double-continuation form: the saved
//! question is passed alongside the one being consumed, and a failure
//! restarts the fallback from the saved copy.  Kept to check that the
//! single-continuation form used by the evaluators agrees with it.

use std::rc::Rc;

use super::cps::{drive, sem_question, term, to_sem, Bounce, CpsAnswer, CpsVar, Ctx, SemQuestion, SemTerm};
use crate::error::{EvalError, Fuel};
use crate::syntax::comp::{all_names_option, all_names_term, subst_option, subst_term};
use crate::syntax::{CompOption, CompTerm, Frame, Fresh, Question, SubstEntry};

/// `Opt⟦O⟧ q f k`.  On success the failure binder receives the fallback
/// re-asked with the consumed prefix of `q` followed by whatever question
/// it is later given.
pub fn option(
    mut o: Rc<CompOption<CpsVar>>,
    saved: SemQuestion,
    f: SemTerm,
    mut k: SemQuestion,
    ctx: &mut Ctx,
) -> Result<Bounce, EvalError> {
    loop {
        let (next, rest) = match (&*o, k.uncons()) {
            (CompOption::Done(x, m), _) => {
                let (f, saved, suffix) = (f.clone(), saved.clone(), k.len());
                let resumed = SemTerm::new(move |k2, _| {
                    Ok(Bounce::Call(f.clone(), saved.replace_suffix(suffix, &k2)))
                });
                let entry = SubstEntry::Term(CompTerm::var(CpsVar::Term(resumed)));
                let m = subst_term(m, &[(x.clone(), entry)], &mut ctx.fresh)?;
                return Ok(Bounce::Call(term(&m), k));
            }
            (CompOption::PopArg(x, o2), Some((Frame::Arg(y), k2))) => {
                let entry = SubstEntry::Term(CompTerm::var(CpsVar::Term(y.clone())));
                (subst_option(o2, &[(x.clone(), entry)], &mut ctx.fresh)?, k2.clone())
            }
            (CompOption::GetIdx(i, o2), Some((Frame::Idx(j), k2))) if i == j => (o2.clone(), k2.clone()),
            _ => return Ok(Bounce::Call(f, saved)),
        };
        o = next;
        k = rest;
    }
}

/// `Opt⟦O⟧ k f k` for a syntactic option, failure and question.
pub fn apply_option(
    o: &Rc<CompOption>,
    failure: &Rc<CompTerm>,
    q: &Question<Rc<CompTerm>>,
    fuel: u64,
) -> Result<CpsAnswer, EvalError> {
    let mut names = all_names_option(o);
    names.extend(all_names_term(failure));
    for f in q.iter() {
        if let Frame::Arg(m) = f {
            names.extend(all_names_term(m));
        }
    }
    let mut ctx = Ctx::new(Fresh::avoiding(&names));
    let f = term(&failure.map_vars(&to_sem));
    let k = sem_question(q);
    let start = option(o.map_vars(&to_sem), k.clone(), f, k, &mut ctx)?;
    drive(start, &mut Fuel::new(fuel), &mut ctx)
}

