//! The seed-class registry: schema plus builder per problem class.
//!
//! The twelve classes span every structural feature the complexity score
//! counts: binary, general-integer, and continuous variables; plain linear,
//! Big-M linear, indicator, and quadratic constraints.

mod continuous;
mod packing;
mod planning;
mod routing;

use super::{Builder, GeneratorSchema};

pub(super) fn registry() -> Vec<(GeneratorSchema, Builder)> {
    vec![
        (packing::knapsack_schema(), packing::knapsack as Builder),
        (packing::bin_packing_schema(), packing::bin_packing as Builder),
        (packing::set_cover_schema(), packing::set_cover as Builder),
        (routing::assignment_schema(), routing::assignment as Builder),
        (routing::transportation_schema(), routing::transportation as Builder),
        (routing::tsp_mtz_schema(), routing::tsp_mtz as Builder),
        (routing::multicommodity_flow_schema(), routing::multicommodity_flow as Builder),
        (planning::cflp_schema(), planning::cflp as Builder),
        (planning::lot_sizing_schema(), planning::lot_sizing as Builder),
        (planning::production_planning_schema(), planning::production_planning as Builder),
        (continuous::diet_schema(), continuous::diet as Builder),
        (continuous::portfolio_schema(), continuous::portfolio as Builder),
    ]
}
