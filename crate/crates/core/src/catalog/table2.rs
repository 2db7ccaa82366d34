use super::{CatalogEntry, Condition, OperatorDef, Solve, Variant};

fn op(label: &'static str, coeffs: [&'static str; 5]) -> OperatorDef {
    OperatorDef {
        label,
        coeffs,
        predicates: vec![],
    }
}

const Q5_1: [&str; 5] = [
    "1",
    "alpha1",
    "0",
    "0",
    "exp(((lambda1-lambda3)^2/4*alpha1^2 - a1)*t/lambda3 + (lambda1-lambda3)/2*alpha1*x)*u",
];

const Q6_4: [&str; 5] = [
    "1",
    "0",
    "exp(((lambda3-lambda2)*a1 - (lambda3-lambda1)*a2)/(lambda3*(lambda1-lambda2))*t)*w",
    "-exp(((lambda3-lambda2)*a1 - (lambda3-lambda1)*a2)/(lambda3*(lambda1-lambda2))*t)*w",
    "(a2*lambda1 - a1*lambda2)/(lambda3*(lambda2-lambda1))*w",
];

fn q2() -> Vec<OperatorDef> {
    vec![
        op("Q2_1", ["1", "0", "K12*u", "-K12*u", "0"]),
        op("Q2_2", ["1", "0", "-K12*v", "K12*v", "0"]),
        op("Q2_3", ["1", "0", "K13*u", "0", "-K13*u"]),
        op("Q2_4", ["1", "0", "-K13*w", "0", "K13*w"]),
        op("Q2_5", ["1", "0", "0", "K23*v", "-K23*v"]),
        op("Q2_6", ["1", "0", "0", "-K23*w", "K23*w"]),
    ]
}

fn q4() -> Vec<OperatorDef> {
    vec![
        op("Q4_1", ["1", "0", "K12*u", "-K12*u + alpha*u", "-alpha*u"]),
        op("Q4_2", ["1", "0", "-K12*v + alpha*v", "K12*v", "-alpha*v"]),
        op("Q4_3", ["1", "0", "K13*u", "alpha*u", "-K13*u - alpha*u"]),
        op("Q4_4", ["1", "0", "-K13*w + alpha*w", "-alpha*w", "K13*w"]),
        op("Q4_5", ["1", "0", "alpha*v", "K23*v", "-K23*v - alpha*v"]),
        op("Q4_6", ["1", "0", "alpha*w", "-K23*w - alpha*w", "K23*w"]),
    ]
}

fn q6() -> Vec<OperatorDef> {
    vec![
        op(
            "Q6_1",
            [
                "1",
                "alpha1",
                "0",
                "0",
                "exp(((lambda2-lambda3)^2/4*alpha1^2 - a2)*t/lambda3 + (lambda2-lambda3)/2*alpha1*x)*v",
            ],
        ),
        op(
            "Q6_2",
            [
                "1",
                "0",
                "K12*u",
                "-K12*u",
                "beta*exp(((lambda1-lambda3)*a2 - (lambda2-lambda3)*a1)/(lambda3*(lambda2-lambda1))*t)*u",
            ],
        ),
        op(
            "Q6_3",
            [
                "1",
                "0",
                "-K12*v",
                "K12*v",
                "beta*exp(((lambda2-lambda3)*a1 - (lambda1-lambda3)*a2)/(lambda3*(lambda1-lambda2))*t)*v",
            ],
        ),
        op("Q6_4", Q6_4),
    ]
}

const SUM: [&str; 3] = ["a1+u+v+w", "a2+u+v+w", "a3+u+v+w"];

fn unit(label: &'static str, param: &'static str) -> Solve {
    Solve {
        label,
        param,
        value: "1",
    }
}

fn ne(label: &'static str, expr: &'static str) -> Condition {
    Condition::NonZero { label, expr }
}

pub(super) fn entries() -> Vec<CatalogEntry> {
    let entry = |case, reactions| CatalogEntry {
        table: 2,
        case,
        reactions,
        solves: vec![],
        conditions: vec![],
        operators: vec![],
        extra_params: &[],
        variants: vec![],
    };
    let mut out = Vec::new();

    let mut e = entry(1, ["a1+b*u+b*v+d*w", "a2+b*u+b*v+d*w", "a3+u+v+d3*w"]);
    e.conditions = vec![
        ne("a1 != a2", "a1-a2"),
        Condition::NotAllZero {
            label: "(b-1)^2 + (d-d3)^2 != 0",
            exprs: &["b-1", "d-d3"],
        },
    ];
    e.operators = vec![
        op("op1", ["1", "0", "K12*u", "-K12*u", "0"]),
        op("op2", ["1", "0", "-K12*v", "K12*v", "0"]),
    ];
    out.push(e);

    let mut e = entry(2, SUM);
    e.conditions = vec![Condition::NotAllZero {
        label: "(a1-a2)^2 + (a1-a3)^2 != 0",
        exprs: &["a1-a2", "a1-a3"],
    }];
    e.operators = q2();
    out.push(e);

    let mut e = entry(3, SUM);
    e.solves = vec![Solve {
        label: "(lambda2-lambda3)*a1 - lambda2*a3 + lambda3*a2 = 0",
        param: "a1",
        value: "(lambda2*a3 - lambda3*a2)/(lambda2-lambda3)",
    }];
    e.conditions = vec![ne("a2 != a3", "a2-a3")];
    e.operators = q2();
    e.operators.push(OperatorDef {
        label: "op7",
        coeffs: [
            "1",
            "0",
            "0",
            "beta*exp((a2-a3)/(lambda2-lambda3)*t)*u",
            "-beta*exp((a2-a3)/(lambda2-lambda3)*t)*u",
        ],
        predicates: vec![ne("beta != 0", "beta")],
    });
    out.push(e);

    let mut e = entry(4, SUM);
    e.solves = vec![Solve {
        label: "(lambda2-lambda3)*a1 - (lambda1-lambda3)*a2 + (lambda1-lambda2)*a3 = 0",
        param: "a3",
        value: "((lambda1-lambda3)*a2 - (lambda2-lambda3)*a1)/(lambda1-lambda2)",
    }];
    e.conditions = vec![Condition::NotAllZero {
        label: "(a1-a2)^2 + alpha^2 != 0",
        exprs: &["a1-a2", "alpha"],
    }];
    e.operators = q4();
    out.push(e);

    let mut e = entry(5, ["a1+b*u+v", "a2+u+c*v", "b*u+v"]);
    e.conditions = vec![Condition::NotAllZero {
        label: "(b-1)^2 + (c-1)^2 != 0",
        exprs: &["b-1", "c-1"],
    }];
    e.operators = vec![op("Q5_1", Q5_1)];
    out.push(e);

    let mut e = entry(6, ["a1+u+v", "a2+u+v", "u+v"]);
    e.operators = vec![op("Q5_1", Q5_1)];
    e.operators.extend(q6());
    out.push(e);

    let mut e = entry(7, ["a1+b*u+c*v", "a2+u+v", "b*u+v"]);
    e.solves = vec![
        unit("lambda2 = 1", "lambda2"),
        unit("lambda3 = 1", "lambda3"),
        Solve {
            label: "a1*(1-b) = a2*b*(1-c)",
            param: "a1",
            value: "a2*b*(1-c)/(1-b)",
        },
    ];
    e.conditions = vec![ne("b != 1", "b-1"), ne("c != 1", "c-1")];
    e.operators = vec![op("op1", ["1", "0", "0", "0", "(1-b)*u + (1-c)*v + a2*(1-c)"])];
    out.push(e);

    let mut e = entry(8, ["a+b*u+c*v", "a+u+v", "b*u+v"]);
    e.extra_params = &["a"];
    e.solves = vec![
        unit("lambda2 = 1", "lambda2"),
        unit("lambda3 = 1", "lambda3"),
        Solve {
            label: "b*(2-c) = 1",
            param: "b",
            value: "1/(2-c)",
        },
    ];
    e.conditions = vec![ne("b != 1", "b-1"), ne("c != 1", "c-1")];
    e.operators = vec![op("op1", ["1", "0", "0", "0", "1-c + ((1-b)*u + (1-c)*v)*Phi4"])];
    e.variants = vec![Variant {
        label: "a = 0",
        overrides: &[("a", "0")],
    }];
    out.push(e);

    let mut e = entry(9, ["a1+u+v", "a2+u+v", "u+v"]);
    e.solves = vec![unit("lambda2 = 1", "lambda2"), unit("lambda3 = 1", "lambda3")];
    e.operators = vec![
        op("Q9_1", Q5_1),
        op("Q9_2", Q6_4),
        op("Q9_3", ["1", "0", "K12*u", "-K12*u", "Phi1*u + Phi2*v + beta1"]),
        op("Q9_4", ["1", "0", "0", "0", "Phi3*u + Phi2*v + beta1"]),
        op("Q9_5", ["1", "0", "-K12*v", "K12*v", "0"]),
    ];
    e.variants = vec![
        Variant {
            label: "a2 = 0",
            overrides: &[("a2", "0")],
        },
        Variant {
            label: "a1 = 0",
            overrides: &[("a1", "0")],
        },
    ];
    out.push(e);

    out
}
