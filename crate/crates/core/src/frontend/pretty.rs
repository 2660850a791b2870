//! Printer producing the concrete syntax accepted by the parser, with as
//! few parentheses as the grammar allows.

use std::fmt::Write;

use crate::syntax::{CompOption, CompResponse, CompTerm, Copattern, Frame, MonoOption, MonoTerm, Question, Variable};

/// Where a compositional term is printed.  `Open` extends to a closing
/// delimiter, `Bang` is followed by `!`, `Head` starts a chain and `Arg`
/// is an argument.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    Open,
    Bang,
    Head,
    Arg,
}

fn var_name<V: Variable>(v: &V) -> String {
    v.name().map_or_else(|| "<value>".to_string(), |x| x.to_string())
}

pub fn copattern(l: &Copattern) -> String {
    if l.is_nop() {
        return "ε".into();
    }
    frames(l, |x| x.to_string())
}

fn frames<P>(q: &Question<P>, arg: impl Fn(&P) -> String) -> String {
    let parts: Vec<String> = q
        .iter()
        .map(|f| match f {
            Frame::Arg(p) => arg(p),
            Frame::Idx(i) => i.to_string(),
        })
        .collect();
    parts.join(" · ")
}

/// Question in trace notation: frames separated by `·`, or `ε`.
pub fn question<P>(q: &Question<P>, arg: impl Fn(&P) -> String) -> String {
    if q.is_nop() {
        "ε".into()
    } else {
        frames(q, arg)
    }
}

pub fn mono_question<V: Variable>(q: &Question<std::rc::Rc<MonoTerm<V>>>) -> String {
    question(q, |m| mono_arg(m))
}

pub fn comp_question<V: Variable>(q: &Question<std::rc::Rc<CompTerm<V>>>) -> String {
    question(q, |m| comp_arg(m))
}

// Monolithic terms.

pub fn mono_term<V: Variable>(m: &MonoTerm<V>) -> String {
    let mut out = String::new();
    mono(m, false, &mut out);
    out
}

pub fn mono_arg<V: Variable>(m: &MonoTerm<V>) -> String {
    let mut out = String::new();
    mono(m, true, &mut out);
    out
}

fn mono<V: Variable>(m: &MonoTerm<V>, arg: bool, out: &mut String) {
    let chain = matches!(m, MonoTerm::App(..) | MonoTerm::Idx(..) | MonoTerm::Dot(..));
    if arg && chain {
        out.push('(');
        mono(m, false, out);
        out.push(')');
        return;
    }
    match m {
        MonoTerm::Var(x) => out.push_str(&var_name(x)),
        MonoTerm::App(f, n) => {
            mono(f, false, out);
            out.push(' ');
            mono(n, true, out);
        }
        MonoTerm::Idx(f, i) => {
            mono(f, false, out);
            let _ = write!(out, " {i}");
        }
        MonoTerm::Dot(f) => {
            mono(f, false, out);
            out.push('.');
        }
        MonoTerm::Obj(os) => {
            out.push_str("fun ");
            out.push_str(&mono_options(os));
        }
    }
}

/// `{ L -> M | ... }`, or `{ }` when empty.
pub fn mono_options<V: Variable>(os: &[MonoOption<V>]) -> String {
    if os.is_empty() {
        return "{ }".into();
    }
    let parts: Vec<String> = os
        .iter()
        .map(|o| {
            let lhs: Vec<String> = o
                .lhs
                .iter()
                .map(|f| match f {
                    Frame::Arg(x) | Frame::Idx(x) => x.to_string(),
                })
                .collect();
            let body = mono_term(&o.rhs);
            if lhs.is_empty() {
                format!("-> {body}")
            } else {
                format!("{} -> {body}", lhs.join(" "))
            }
        })
        .collect();
    format!("{{ {} }}", parts.join(" | "))
}

// Compositional terms.

pub fn comp_term<V: Variable>(m: &CompTerm<V>) -> String {
    let mut out = String::new();
    comp(m, Pos::Open, &mut out);
    out
}

pub fn comp_arg<V: Variable>(m: &CompTerm<V>) -> String {
    let mut out = String::new();
    comp(m, Pos::Arg, &mut out);
    out
}

pub fn comp_option<V: Variable>(o: &CompOption<V>) -> String {
    let mut out = String::new();
    option(o, &mut out);
    out
}

pub fn comp_response<V: Variable>(r: &CompResponse<V>) -> String {
    let mut out = String::new();
    response(r, &mut out);
    out
}

fn comp<V: Variable>(m: &CompTerm<V>, pos: Pos, out: &mut String) {
    let parens = match m {
        CompTerm::Capture(..) => pos != Pos::Open,
        CompTerm::Handle(..) => matches!(pos, Pos::Head | Pos::Arg),
        CompTerm::App(..) | CompTerm::Idx(..) | CompTerm::Dot(..) => pos == Pos::Arg,
        CompTerm::Var(_) | CompTerm::Raise => false,
    };
    if parens {
        out.push('(');
        comp(m, Pos::Open, out);
        out.push(')');
        return;
    }
    match m {
        CompTerm::Var(x) => out.push_str(&var_name(x)),
        CompTerm::Raise => out.push_str("raise"),
        CompTerm::App(f, n) => {
            comp(f, Pos::Head, out);
            out.push(' ');
            comp(n, Pos::Arg, out);
        }
        CompTerm::Idx(f, i) => {
            comp(f, Pos::Head, out);
            let _ = write!(out, " {i}");
        }
        CompTerm::Dot(f) => {
            comp(f, Pos::Head, out);
            out.push('.');
        }
        CompTerm::Handle(o, fallback) => {
            out.push_str("{ ");
            option(o, out);
            out.push_str(" } ? ");
            comp(fallback, pos, out);
        }
        CompTerm::Capture(q, r) => {
            let _ = write!(out, "capture {q} -> ");
            response(r, out);
        }
    }
}

fn option<V: Variable>(o: &CompOption<V>, out: &mut String) {
    match o {
        CompOption::PopArg(x, rest) | CompOption::GetIdx(x, rest) => {
            let _ = write!(out, "{x} -> ");
            option(rest, out);
        }
        CompOption::Done(x, m) => {
            let _ = write!(out, "? {x} -> ");
            comp(m, Pos::Open, out);
        }
    }
}

fn response<V: Variable>(r: &CompResponse<V>, out: &mut String) {
    match r {
        CompResponse::Splat(k) => out.push_str(&var_name(k)),
        CompResponse::End => out.push_str("end"),
        CompResponse::AndThen(m, rest) => {
            comp(m, Pos::Bang, out);
            out.push_str(" ! ");
            response(rest, out);
        }
    }
}
