use super::{CatalogEntry, Condition, OperatorDef, Solve};

const D: [&str; 5] = ["2*t", "x", "-2*u", "-2*v", "-2*w"];

fn op(label: &'static str, coeffs: [&'static str; 5]) -> OperatorDef {
    OperatorDef {
        label,
        coeffs,
        predicates: vec![],
    }
}

fn eta3(label: &'static str, e: &'static str) -> OperatorDef {
    op(label, ["0", "0", "0", "0", e])
}

fn unit(param: &'static str) -> Solve {
    Solve {
        label: match param {
            "lambda1" => "lambda1 = 1",
            "lambda2" => "lambda2 = 1",
            _ => "lambda3 = 1",
        },
        param,
        value: "1",
    }
}

pub(super) fn entries() -> Vec<CatalogEntry> {
    let entry = |case, reactions, solves, conditions, operators, extra_params| CatalogEntry {
        table: 1,
        case,
        reactions,
        solves,
        conditions,
        operators,
        extra_params,
        variants: vec![],
    };
    vec![
        entry(
            1,
            ["b1*u+c1*v+d1*w", "b2*u+c2*v+d2*w", "b3*u+c3*v+d3*w"],
            vec![],
            vec![],
            vec![op("D", D)],
            &[],
        ),
        entry(
            2,
            ["c1*v+d1*w", "a2+c2*v+w", "a3+v+d3*w"],
            vec![],
            vec![],
            vec![op("u*d_u", ["0", "0", "u", "0", "0"])],
            &[],
        ),
        entry(
            3,
            ["c1*v+d1*w", "c2*v+w", "v+d3*w"],
            vec![],
            vec![],
            vec![op("u*d_u", ["0", "0", "u", "0", "0"]), op("D", D)],
            &[],
        ),
        entry(
            4,
            ["a1+b*u+v", "a2+u+c*v", "u+c*v"],
            vec![unit("lambda2"), unit("lambda3")],
            vec![],
            vec![eta3("exp(-a2*t)*v*d_w", "exp(-a2*t)*v"), eta3("w*d_w", "w")],
            &[],
        ),
        entry(
            5,
            ["b*u+v", "u+c*v", "u+c*v"],
            vec![unit("lambda2"), unit("lambda3")],
            vec![],
            vec![eta3("v*d_w", "v"), eta3("w*d_w", "w"), op("D", D)],
            &[],
        ),
        entry(
            6,
            ["a1+u+v", "a2+u+v", "u+v"],
            vec![unit("lambda1"), unit("lambda2"), unit("lambda3")],
            vec![Condition::NonZero {
                label: "a1*a2*(a1-a2) != 0",
                expr: "a1*a2*(a1-a2)",
            }],
            vec![
                eta3("exp(-a1*t)*u*d_w", "exp(-a1*t)*u"),
                eta3("w*d_w", "w"),
                eta3("exp(-a2*t)*v*d_w", "exp(-a2*t)*v"),
                eta3("(a2*(u+a1)+a1*v)*d_w", "a2*(u+a1)+a1*v"),
            ],
            &[],
        ),
        entry(
            7,
            ["a+u+v", "u+v", "u+v"],
            vec![unit("lambda1"), unit("lambda2"), unit("lambda3")],
            vec![Condition::NonZero {
                label: "a != 0",
                expr: "a",
            }],
            vec![
                eta3("exp(-a*t)*u*d_w", "exp(-a*t)*u"),
                eta3("w*d_w", "w"),
                eta3("v*d_w", "v"),
                eta3("(u+a+a*v*t)*d_w", "u+a+a*v*t"),
            ],
            &["a"],
        ),
        entry(
            8,
            ["b*u+v", "u+c*v", "b*u+c*v"],
            vec![unit("lambda1"), unit("lambda2"), unit("lambda3")],
            vec![
                Condition::NonZero {
                    label: "b != 1",
                    expr: "b-1",
                },
                Condition::NonZero {
                    label: "c != 1",
                    expr: "c-1",
                },
            ],
            vec![
                op("D", D),
                eta3("w*d_w", "w"),
                eta3("((b-1)*u+(1-c)*v)*d_w", "(b-1)*u+(1-c)*v"),
            ],
            &[],
        ),
    ]
}
