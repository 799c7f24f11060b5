//! Long-format convergence tables: one row per (N, route, M) or
//! (N, route, n_max), with the change from the previous row of the series.

use corr_core::ExpansionContext;

use crate::args::{parse_list, parse_routes, parse_separations, SweepArgs};
use crate::report::{emit, Header, Row};
use crate::table::{check_orders, compute};
use crate::Exit;

pub const SWEEP_COLUMNS: &str = "N,route,M,n_max,value,est_error,diff";

enum Axis {
    Nodes(Vec<usize>),
    Orders(Vec<usize>),
}

fn axis(args: &SweepArgs) -> Result<Axis, Exit> {
    match (&args.m_list, &args.order_list) {
        (Some(m), None) => Ok(Axis::Nodes(parse_list("--M-list", m)?)),
        (None, Some(o)) => {
            let orders = parse_list("--order-list", o)?;
            for &n in &orders {
                check_orders(n)?;
            }
            Ok(Axis::Orders(orders))
        }
        _ => Err(Exit::usage("give exactly one of --M-list or --order-list")),
    }
}

/// Rows grouped per `(N, route)` series, each series in sweep order.
fn render(series: Vec<Vec<Row>>) -> String {
    let mut s = String::new();
    for rows in series {
        let mut prev: Option<f64> = None;
        for r in rows {
            let diff = prev.map(|p| format!("{:.16e}", (r.value - p).abs())).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{},{:.16e},{:.16e},{}\n",
                r.n, r.route, r.m, r.n_max, r.value, r.est_error, diff
            ));
            prev = Some(r.value);
        }
    }
    s
}

pub fn run(args: &SweepArgs) -> Result<(), Exit> {
    let params = args.params.resolve()?;
    let ns = parse_separations(&args.n)?;
    let routes = parse_routes(&args.routes)?;
    check_orders(args.orders)?;
    let axis = axis(args)?;

    // one table per sweep point, transposed into series afterwards
    let mut points: Vec<Vec<Row>> = Vec::new();
    let header_grid;
    match &axis {
        Axis::Nodes(ms) => {
            header_grid = args.grid.grid(&params, ms[0])?;
            for &m in ms {
                let ctx = ExpansionContext::new(params, args.grid.grid(&params, m)?)?;
                points.push(compute(&ctx, &ns, &routes, args.orders).into_iter().collect::<Result<_, _>>()?);
            }
        }
        Axis::Orders(orders) => {
            header_grid = args.grid.grid(&params, args.grid.m)?;
            let ctx = ExpansionContext::new(params, header_grid.clone())?;
            for &n_max in orders {
                points.push(compute(&ctx, &ns, &routes, n_max).into_iter().collect::<Result<_, _>>()?);
            }
        }
    }
    let cells = ns.len() * routes.len();
    let series: Vec<Vec<Row>> = (0..cells).map(|c| points.iter().map(|p| p[c].clone()).collect()).collect();

    let n_max = match &axis {
        Axis::Nodes(_) => args.orders,
        Axis::Orders(o) => o.iter().copied().max().unwrap_or(0),
    };
    let mut text = Header::new(&params, &header_grid, n_max).csv_lines(&params);
    text.push_str(SWEEP_COLUMNS);
    text.push('\n');
    text.push_str(&render(series));
    emit(&text, args.out.as_deref())
}
