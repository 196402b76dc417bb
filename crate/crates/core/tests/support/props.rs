//! Property suites shared by the `properties` and `acceptance` targets.

use std::cell::Cell;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use strfmt::editdesc::{
    self, render_char, render_exp, render_fixed, render_int, render_logical, CharDesc,
    EditDescriptor, ExpDesc, FixedDesc, FormatList, IntDesc, LogicalDesc, SignMode,
};
use strfmt::logman::LogConfig;
use strfmt::stream::{Manipulator, StreamBuilder};
use strfmt::stringify::{self, v2s_bool, v2s_int, v2s_intvec, v2s_real};
use strfmt::{BoolStyle, DefaultRules, LogLevel, Point3d, Value};

use super::*;

pub const MIN_TRIALS: u32 = 10_000;

pub type Suite = fn(u32) -> Result<u32, String>;

/// Every property suite, by name.
pub const SUITES: &[(&str, Suite)] = &[
    ("width invariant: I", width_int),
    ("width invariant: F and E incl. non-finite", width_real),
    ("width invariant: A and L", width_char_logical),
    ("I0 minimality", i0_minimal),
    ("F digits against exact oracle", fixed_oracle),
    ("E digits against exact oracle", exp_oracle),
    ("parse/to_text roundtrip", roundtrip),
    ("group expansion equivalence", group_expansion),
    (
        "sign control is positional; render is pure",
        sign_positional,
    ),
    ("stream delegates to v2s", stream_delegation),
    ("manipulators: no text, idempotent", manipulator_neutral),
    ("stream split associativity", stream_associativity),
    ("v2s_bool bijection per style", bool_bijection),
    ("v2s output is trimmed; I0 is the int default", v2s_trimmed),
    ("v2s_intvec line shape", intvec_shape),
    ("log gating monotone in threshold", log_monotonic),
];

/// Runs `test` over `cases` generated inputs and returns the number of
/// inputs evaluated.
fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let count = Cell::new(0u32);
    runner
        .run(&strategy, |v| {
            count.set(count.get() + 1);
            test(v)
        })
        .map_err(|e| e.to_string())?;
    Ok(count.get())
}

fn width_int(cases: u32) -> Result<u32, String> {
    run(
        cases,
        (any::<i64>(), 1usize..25, any_sign()),
        |(v, width, sign)| {
            let out = render_int(v, IntDesc { width }, sign);
            prop_assert_eq!(out.chars().count(), width);
            prop_assert!(
                out.chars().all(|c| c == '*') || !out.contains('*'),
                "{:?}",
                out
            );
            Ok(())
        },
    )
}

fn width_real(cases: u32) -> Result<u32, String> {
    let desc = prop_oneof![
        (1usize..25, 0usize..10)
            .prop_map(|(width, decimals)| EditDescriptor::from(FixedDesc { width, decimals })),
        (1usize..25, 1usize..10, proptest::option::of(1usize..5)).prop_map(
            |(width, decimals, exp_digits)| {
                EditDescriptor::from(ExpDesc {
                    width,
                    decimals,
                    exp_digits,
                })
            }
        ),
    ];
    run(cases, (any_real(), desc, any_sign()), |(v, desc, sign)| {
        let (out, width) = match desc {
            EditDescriptor::Fixed(d) => (render_fixed(v, d, sign), d.width),
            EditDescriptor::Exp(d) => (render_exp(v, d, sign), d.width),
            _ => unreachable!(),
        };
        prop_assert_eq!(out.chars().count(), width, "{:?}", out);
        prop_assert!(
            out.chars().all(|c| c == '*') || !out.contains('*'),
            "{:?}",
            out
        );
        Ok(())
    })
}

fn width_char_logical(cases: u32) -> Result<u32, String> {
    let text = proptest::string::string_regex("[ -~äß]{0,16}").unwrap();
    run(
        cases,
        (text, 1usize..20, any::<bool>(), 1usize..8),
        |(s, w, b, lw)| {
            let out = render_char(&s, CharDesc { width: Some(w) });
            prop_assert_eq!(out.chars().count(), w);
            prop_assert_eq!(render_char(&s, CharDesc { width: None }), s.clone());
            let out = render_logical(b, LogicalDesc { width: lw });
            prop_assert_eq!(out.chars().count(), lw);
            prop_assert_eq!(out.trim_start(), if b { "T" } else { "F" });
            Ok(())
        },
    )
}

fn i0_minimal(cases: u32) -> Result<u32, String> {
    run(cases, any::<i64>(), |v| {
        prop_assert_eq!(
            render_int(v, IntDesc { width: 0 }, SignMode::Suppress),
            v.to_string()
        );
        let plus = if v >= 0 {
            format!("+{v}")
        } else {
            v.to_string()
        };
        prop_assert_eq!(render_int(v, IntDesc { width: 0 }, SignMode::Plus), plus);
        Ok(())
    })
}

fn fixed_oracle(cases: u32) -> Result<u32, String> {
    run(
        cases,
        (finite_real(), 0usize..25, 0usize..10, any::<bool>()),
        |(v, width, decimals, plus)| {
            let sign = if plus {
                SignMode::Plus
            } else {
                SignMode::Suppress
            };
            let out = render_fixed(v, FixedDesc { width, decimals }, sign);
            prop_assert_eq!(out, fixed_field(v, width, decimals, plus), "v = {:e}", v);
            Ok(())
        },
    )
}

fn exp_oracle(cases: u32) -> Result<u32, String> {
    run(
        cases,
        (
            finite_real(),
            1usize..30,
            1usize..10,
            proptest::option::of(1usize..5),
            any::<bool>(),
        ),
        |(v, width, decimals, exp_digits, plus)| {
            let sign = if plus {
                SignMode::Plus
            } else {
                SignMode::Suppress
            };
            let out = render_exp(
                v,
                ExpDesc {
                    width,
                    decimals,
                    exp_digits,
                },
                sign,
            );
            prop_assert_eq!(
                out,
                exp_field(v, width, decimals, exp_digits, plus),
                "v = {:e}",
                v
            );
            Ok(())
        },
    )
}

fn roundtrip(cases: u32) -> Result<u32, String> {
    run(cases, format_list(), |fmt| {
        let text = fmt.to_text();
        let back =
            editdesc::parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &fmt, "{}", text);
        prop_assert_eq!(back.to_text(), text);
        Ok(())
    })
}

fn group_expansion(cases: u32) -> Result<u32, String> {
    run(
        cases,
        (items_with_values(), 1usize..5),
        |((items, values), repeat)| {
            let grouped = FormatList::new(vec![EditDescriptor::Group {
                repeat,
                items: items.clone(),
            }]);
            let flat = FormatList::new(
                items
                    .iter()
                    .cloned()
                    .cycle()
                    .take(items.len() * repeat)
                    .collect(),
            );
            let values: Vec<Value> = values
                .iter()
                .cloned()
                .cycle()
                .take(values.len() * repeat)
                .collect();
            let a = editdesc::render(&grouped, &values, SignMode::Suppress, "\n");
            let b = editdesc::render(&flat, &values, SignMode::Suppress, "\n");
            prop_assert_eq!(a.map_err(|e| e.to_string()), b.map_err(|e| e.to_string()));
            Ok(())
        },
    )
}

fn sign_positional(cases: u32) -> Result<u32, String> {
    run(
        cases,
        (items_with_values(), any_sign()),
        |((items, values), sign)| {
            let plain = FormatList::new(items.clone());
            let mut prefixed = vec![EditDescriptor::SignControl(sign)];
            prefixed.extend(items);
            let prefixed = FormatList::new(prefixed);
            let a = editdesc::render(&prefixed, &values, SignMode::Suppress, "\n").unwrap();
            let b = editdesc::render(&plain, &values, sign, "\n").unwrap();
            prop_assert_eq!(&a, &b);
            let again = editdesc::render(&prefixed, &values, SignMode::Suppress, "\n").unwrap();
            prop_assert_eq!(a, again);
            Ok(())
        },
    )
}

#[derive(Debug, Clone)]
pub enum Op {
    Text(String),
    Int(i64),
    Real(f64),
    Bool(bool),
    Point(f64, f64, f64),
    Manip(Manipulator),
}

fn any_style() -> impl Strategy<Value = BoolStyle> {
    proptest::sample::select(BoolStyle::ALL.to_vec())
}

pub fn manipulator() -> impl Strategy<Value = Manipulator> {
    prop_oneof![
        Just(Manipulator::ShowPos),
        Just(Manipulator::NoShowPos),
        (0usize..8).prop_map(Manipulator::SetPrecision),
        (0usize..16).prop_map(Manipulator::SetWidth),
        any_style().prop_map(Manipulator::BoolAlpha),
    ]
}

fn small_real() -> impl Strategy<Value = f64> {
    prop_oneof![(-1.0e4f64..1.0e4), any_real()]
}

pub fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        proptest::string::string_regex("[ -~]{0,6}")
            .unwrap()
            .prop_map(Op::Text),
        any::<i64>().prop_map(Op::Int),
        small_real().prop_map(Op::Real),
        any::<bool>().prop_map(Op::Bool),
        (-1.0e3f64..1.0e3, -1.0e3f64..1.0e3, -1.0e3f64..1.0e3)
            .prop_map(|(x, y, z)| Op::Point(x, y, z)),
        manipulator().prop_map(Op::Manip),
    ]
}

fn apply(b: &mut StreamBuilder, op: &Op) {
    match op {
        Op::Text(s) => b.append_text(s),
        Op::Int(v) => b.append_int(*v),
        Op::Real(v) => b.append_real(*v),
        Op::Bool(v) => b.append_bool(*v),
        Op::Point(x, y, z) => b.append_user(&Point3d::new(*x, *y, *z)),
        Op::Manip(m) => b.apply(*m),
    };
}

fn rules() -> impl Strategy<Value = DefaultRules> {
    prop_oneof![
        Just(DefaultRules::default()),
        Just(DefaultRules::from_specs("I5", "E12.4E3").unwrap()),
        Just(DefaultRules::from_specs("I3", "F8.2").unwrap()),
    ]
}

/// A builder that reached an arbitrary state through arbitrary operations.
fn builder() -> impl Strategy<Value = StreamBuilder> {
    (rules(), proptest::collection::vec(op(), 0..8)).prop_map(|(rules, ops)| {
        let mut b = StreamBuilder::with_rules(rules);
        for op in &ops {
            apply(&mut b, op);
        }
        b
    })
}

fn stream_delegation(cases: u32) -> Result<u32, String> {
    run(cases, (builder(), op()), |(b, op)| {
        let mut actual = b.clone();
        apply(&mut actual, &op);
        let rules = b.rules().clone();
        let width = b.state().width;
        let numeric = |spec: String, value: Value| -> String {
            match width {
                None => stringify::v2s(&value, Some(&spec), &rules).unwrap(),
                Some(_) => {
                    let fmt = editdesc::parse(&spec).unwrap();
                    editdesc::render(&fmt, &[value], SignMode::Suppress, "\n").unwrap()
                }
            }
        };
        let pad = |s: String| match width {
            Some(w) => format!("{s:>w$}"),
            None => s,
        };
        let appended = match &op {
            Op::Text(s) => s.clone(),
            Op::Int(v) => numeric(b.int_spec(), Value::Int(*v)),
            Op::Real(v) => numeric(b.real_spec(), Value::Real(*v)),
            Op::Bool(v) => pad(v2s_bool(*v, Some(b.state().bool_style), &rules)),
            Op::Point(x, y, z) => pad(stringify::v2s_user(&Point3d::new(*x, *y, *z))),
            Op::Manip(_) => String::new(),
        };
        prop_assert_eq!(actual.as_str(), format!("{}{}", b.as_str(), appended));
        if matches!(op, Op::Int(_) | Op::Real(_) | Op::Bool(_) | Op::Point(..)) {
            prop_assert_eq!(actual.state().width, None);
        }
        Ok(())
    })
}

fn manipulator_neutral(cases: u32) -> Result<u32, String> {
    run(cases, (builder(), manipulator()), |(b, m)| {
        let mut once = b.clone();
        once.apply(m);
        prop_assert_eq!(once.as_str(), b.as_str());
        prop_assert_eq!(m.text(), "");
        let mut twice = once.clone();
        twice.apply(m);
        prop_assert_eq!(twice.state(), once.state());
        prop_assert_eq!(twice.as_str(), b.as_str());
        Ok(())
    })
}

fn stream_associativity(cases: u32) -> Result<u32, String> {
    let ops = proptest::collection::vec(op(), 0..16);
    run(
        cases,
        (rules(), ops, any::<prop::sample::Index>()),
        |(rules, ops, split)| {
            let k = split.index(ops.len() + 1);
            let mut whole = StreamBuilder::with_rules(rules.clone());
            ops.iter().for_each(|op| apply(&mut whole, op));
            let mut head = StreamBuilder::with_rules(rules.clone());
            ops[..k].iter().for_each(|op| apply(&mut head, op));
            let mut tail = StreamBuilder::with_state(rules, head.state().clone());
            ops[k..].iter().for_each(|op| apply(&mut tail, op));
            prop_assert_eq!(
                format!("{}{}", head.as_str(), tail.as_str()),
                whole.as_str()
            );
            prop_assert_eq!(tail.state(), whole.state());
            Ok(())
        },
    )
}

fn bool_bijection(cases: u32) -> Result<u32, String> {
    run(
        cases,
        (any_style(), any::<bool>(), rules()),
        |(style, v, rules)| {
            let (t, f) = style.tokens();
            prop_assert_ne!(t, f);
            let out = v2s_bool(v, Some(style), &rules);
            prop_assert_eq!(&out, if v { t } else { f });
            let back = BoolStyle::ALL.iter().find_map(|s| match s.tokens() {
                (t, _) if *s == style && t == out => Some(true),
                (_, f) if *s == style && f == out => Some(false),
                _ => None,
            });
            prop_assert_eq!(back, Some(v));
            prop_assert_eq!(v2s_bool(v, None, &rules), rules.bool_style.render(v));
            Ok(())
        },
    )
}

fn v2s_trimmed(cases: u32) -> Result<u32, String> {
    let int_spec = proptest::sample::select(vec!["I0", "I3", "I12", "SP,I8", "(I25)"]);
    let real_spec =
        proptest::sample::select(vec!["F0.2", "F12.4", "E14.5", "SP,E20.6E3", "(F30.1)"]);
    run(
        cases,
        (any::<i64>(), any_real(), int_spec, real_spec),
        |(i, r, is, rs)| {
            let d = DefaultRules::default();
            for out in [
                v2s_int(i, Some(is), &d).unwrap(),
                v2s_real(r, Some(rs), &d).unwrap(),
            ] {
                prop_assert_eq!(out.trim(), out.as_str());
            }
            prop_assert_eq!(
                v2s_int(i, Some("I0"), &d).unwrap(),
                v2s_int(i, None, &d).unwrap()
            );
            prop_assert_eq!(v2s_int(i, None, &d).unwrap(), i.to_string());
            Ok(())
        },
    )
}

fn intvec_shape(cases: u32) -> Result<u32, String> {
    let v = proptest::collection::vec(any::<i64>(), 1..20);
    run(cases, (v, 0usize..8), |(v, width)| {
        let spec = format!("I{width}");
        let out = v2s_intvec(&v, Some(&spec), &DefaultRules::default()).unwrap();
        let lines: Vec<&str> = out.split('\n').collect();
        prop_assert_eq!(lines.len(), v.len());
        for (line, &x) in lines.iter().zip(&v) {
            let field = render_int(x, IntDesc { width }, SignMode::Suppress);
            prop_assert_eq!(*line, format!("| {} |", field.trim_end()));
        }
        Ok(())
    })
}

fn any_level() -> impl Strategy<Value = LogLevel> {
    proptest::sample::select(LogLevel::ALL.to_vec())
}

fn log_monotonic(cases: u32) -> Result<u32, String> {
    run(
        cases,
        (any_level(), any_level(), any_level(), 0usize..4, 0usize..4),
        |(level, t1, t2, own, emit)| {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let cfg = |threshold| LogConfig {
                threshold,
                own_rank: own,
                emit_rank: emit,
                ..LogConfig::default()
            };
            let strict = cfg(hi).should_emit(level);
            let loose = cfg(lo).should_emit(level);
            prop_assert!(!strict || loose);
            if own != emit {
                prop_assert!(!loose);
            }
            Ok(())
        },
    )
}
