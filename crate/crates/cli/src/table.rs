use corr_core::expansions::MAX_N_MAX;
use corr_core::{par, CorrError, ExpansionContext, Route};

use crate::args::{parse_routes, parse_separations, Format, TableArgs};
use crate::report::{emit, ComparisonReport, Header, Row};
use crate::Exit;

/// Routes for a table: the determinant is always included so that every
/// expansion row has its reference.
pub fn table_routes(list: &str) -> Result<Vec<Route>, Exit> {
    let mut routes = parse_routes(list)?;
    if !routes.contains(&Route::Determinant) {
        routes.insert(0, Route::Determinant);
    }
    Ok(routes)
}

pub fn check_orders(n_max: usize) -> Result<(), Exit> {
    if n_max > MAX_N_MAX {
        return Err(Exit::usage(format!("--orders must be at most {MAX_N_MAX}, got {n_max}")));
    }
    Ok(())
}

/// All `(N, route)` cells, computed concurrently, in `(N, route)` order.
pub fn compute(
    ctx: &ExpansionContext,
    ns: &[usize],
    routes: &[Route],
    n_max: usize,
) -> Vec<Result<Row, CorrError>> {
    let cells: Vec<(usize, Route)> = ns.iter().flat_map(|&n| routes.iter().map(move |&r| (n, r))).collect();
    let m = ctx.grid().m();
    par::map_range(cells.len(), |i| {
        let (n, route) = cells[i];
        let order = if route == Route::Determinant { 0 } else { n_max };
        ctx.correlation(n, route, order).map(|e| Row::of(&e, m))
    })
}

pub fn run(args: &TableArgs) -> Result<(), Exit> {
    let params = args.params.resolve()?;
    let grid = args.grid.grid(&params, args.grid.m)?;
    let ns = parse_separations(&args.n)?;
    let routes = table_routes(&args.routes)?;
    check_orders(args.orders)?;
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Exit::usage(format!("--tol must be positive, got {tol}")));
        }
    }
    let header = Header::new(&params, &grid, args.orders);
    let ctx = ExpansionContext::new(params, grid)?;

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in compute(&ctx, &ns, &routes, args.orders) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(e),
        }
    }
    if let Some(e) = failures.iter().find(|e| Exit::from((*e).clone()).code == 2) {
        return Err(Exit::from(e.clone()));
    }
    let mut diagnostics: Vec<String> = failures.iter().map(|e| e.to_string()).collect();
    if let Some(tol) = args.tol {
        for r in rows.iter().filter(|r| r.route != "det" && r.est_error > tol) {
            diagnostics.push(format!("N={} route={} est_error {:e} exceeds --tol {tol:e}", r.n, r.route, r.est_error));
        }
    }

    let report = ComparisonReport { header, rows };
    let text = match args.format {
        Format::Csv => report.to_csv(&params),
        Format::Json => report.to_json(),
    };
    emit(&text, args.out.as_deref())?;
    if diagnostics.is_empty() {
        Ok(())
    } else {
        Err(Exit::convergence(diagnostics.join("\n")))
    }
}
