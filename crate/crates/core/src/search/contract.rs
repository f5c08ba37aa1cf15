use std::collections::BTreeMap;

use crate::numbering::ExponentVector;

use super::model::Model;

/// Intermediate tables larger than this trigger a warning.
pub const DEFAULT_TABLE_BOUND: usize = 1 << 24;

/// A non-negative table over a set of edge variables, indexed by positions in
/// each variable's domain. Row-major with the last variable fastest.
#[derive(Debug, Clone)]
struct Factor {
    vars: Vec<usize>,
    table: Vec<u64>,
}

pub(crate) struct Outcome {
    pub total: u64,
    pub tally: Option<BTreeMap<ExponentVector, u64>>,
    pub warnings: Vec<String>,
}

fn table_size(model: &Model, vars: &[usize]) -> usize {
    vars.iter().map(|&v| model.domains[v].len()).product()
}

/// Visits every joint assignment of `vars` (as domain positions), last
/// variable fastest.
fn for_each_assignment(model: &Model, vars: &[usize], mut f: impl FnMut(&[usize])) {
    let dims: Vec<usize> = vars.iter().map(|&v| model.domains[v].len()).collect();
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; vars.len()];
    loop {
        f(&idx);
        let mut k = vars.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn vertex_factor(model: &Model, v: usize) -> Factor {
    let branches = model.vertex_branches[v];
    let mut vars: Vec<usize> = branches.iter().map(|b| b.edge).collect();
    vars.sort_unstable();
    vars.dedup();
    let mut table = Vec::with_capacity(table_size(model, &vars));
    for_each_assignment(model, &vars, |idx| {
        let value_of = |edge: usize| {
            let k = vars.iter().position(|&w| w == edge).expect("incident edge");
            model.domains[edge][idx[k]]
        };
        let triple = branches.map(|b| model.branch_value(b, value_of(b.edge)));
        table.push(model.vertex_ok(triple) as u64);
    });
    Factor { vars, table }
}

/// Pointwise product of `factors` over the union of their variables.
fn product(model: &Model, factors: &[Factor]) -> Factor {
    let mut vars: Vec<usize> = factors
        .iter()
        .flat_map(|f| f.vars.iter().copied())
        .collect();
    vars.sort_unstable();
    vars.dedup();
    // For each factor, the position in `vars` of each of its variables and
    // the row-major stride of that variable inside the factor.
    let layouts: Vec<Vec<(usize, usize)>> = factors
        .iter()
        .map(|f| {
            let mut stride = 1;
            let mut layout = vec![(0, 0); f.vars.len()];
            for (k, &var) in f.vars.iter().enumerate().rev() {
                layout[k] = (vars.binary_search(&var).expect("var in union"), stride);
                stride *= model.domains[var].len();
            }
            layout
        })
        .collect();
    let mut table = Vec::with_capacity(table_size(model, &vars));
    for_each_assignment(model, &vars, |idx| {
        let mut value = 1u64;
        for (f, layout) in factors.iter().zip(&layouts) {
            let offset: usize = layout.iter().map(|&(pos, stride)| idx[pos] * stride).sum();
            value *= f.table[offset];
            if value == 0 {
                break;
            }
        }
        table.push(value);
    });
    Factor { vars, table }
}

fn sum_out(model: &Model, f: Factor, var: usize) -> Factor {
    let k = f
        .vars
        .iter()
        .position(|&v| v == var)
        .expect("var in factor");
    let dim = model.domains[var].len();
    let inner: usize = f.vars[k + 1..]
        .iter()
        .map(|&v| model.domains[v].len())
        .product();
    let outer = f.table.len() / (dim * inner).max(1);
    let mut table = vec![0u64; outer * inner];
    for o in 0..outer {
        for d in 0..dim {
            let base = (o * dim + d) * inner;
            for i in 0..inner {
                table[o * inner + i] += f.table[base + i];
            }
        }
    }
    let mut vars = f.vars;
    vars.remove(k);
    Factor { vars, table }
}

/// Variable elimination. Self-loop variables go first; the rest follow a
/// greedy minimum-degree order with ties broken by edge index. With
/// `by_exponent`, marked leg variables are kept to the end and read off as
/// the breakdown.
pub(crate) fn contract(model: &Model, by_exponent: bool, table_bound: usize) -> Outcome {
    let mut warnings = Vec::new();
    if model.domains.iter().any(Vec::is_empty) {
        return Outcome {
            total: 0,
            tally: by_exponent.then(BTreeMap::new),
            warnings,
        };
    }

    let mut factors: Vec<Factor> = (0..model.vertex_branches.len())
        .map(|v| vertex_factor(model, v))
        .collect();
    let kept: Vec<usize> = if by_exponent {
        model.marking.iter().map(|b| b.edge).collect()
    } else {
        Vec::new()
    };

    let mut pending: Vec<usize> = (0..model.edge_count())
        .filter(|e| !kept.contains(e))
        .collect();
    while !pending.is_empty() {
        let pick = pending
            .iter()
            .copied()
            .map(|var| {
                let mut neighbours: Vec<usize> = factors
                    .iter()
                    .filter(|f| f.vars.contains(&var))
                    .flat_map(|f| f.vars.iter().copied())
                    .filter(|&w| w != var)
                    .collect();
                neighbours.sort_unstable();
                neighbours.dedup();
                (!model.self_loop[var], neighbours.len(), var)
            })
            .min()
            .expect("pending is non-empty");
        let var = pick.2;
        pending.retain(|&v| v != var);

        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&var));
        factors = rest;
        let joined = product(model, &touching);
        if joined.table.len() > table_bound {
            warnings.push(format!(
                "eliminating edge {var} built a table of {} entries (bound {table_bound})",
                joined.table.len()
            ));
        }
        factors.push(sum_out(model, joined, var));
    }

    let last = product(model, &factors);
    if !by_exponent {
        debug_assert!(last.vars.is_empty());
        return Outcome {
            total: last.table[0],
            tally: None,
            warnings,
        };
    }

    let mut tally = BTreeMap::new();
    let mut total = 0;
    let mut pos = 0;
    for_each_assignment(model, &last.vars, |idx| {
        let count = last.table[pos];
        pos += 1;
        if count == 0 {
            return;
        }
        total += count;
        let mut xs = vec![0u32; model.edge_count()];
        for (k, &var) in last.vars.iter().enumerate() {
            xs[var] = model.domains[var][idx[k]];
        }
        *tally.entry(model.exponent(&xs)).or_insert(0) += count;
    });
    Outcome {
        total,
        tally: Some(tally),
        warnings,
    }
}
