/* co2net - steady-state simulation and design of dense-phase CO2 pipeline
 * networks. C interface: opaque handles, status codes, JSON/GeoJSON strings
 * for structured options and results. Every returned char* is owned by the
 * caller and released with co2net_string_free().
 */
#ifndef CO2NET_H
#define CO2NET_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CO2NET_API __declspec(dllexport)
#elif defined(__GNUC__)
#define CO2NET_API __attribute__((visibility("default")))
#else
#define CO2NET_API
#endif

typedef enum co2net_status {
  CO2NET_OK = 0,
  CO2NET_ERR_INVALID_ARGUMENT = 1,
  CO2NET_ERR_IO = 2,
  CO2NET_ERR_PARSE = 3,
  CO2NET_ERR_VALIDATION = 4,
  CO2NET_ERR_EOS = 5,
  CO2NET_ERR_SINGULAR = 6,
  CO2NET_ERR_NO_CONVERGENCE = 7,
  /* Partial success: outputs are produced, some pairs could not be routed. */
  CO2NET_ERR_UNREACHABLE = 8,
  /* Partial success: the solution exists but leaves the dense phase. */
  CO2NET_ERR_DENSE_PHASE = 9,
  CO2NET_ERR_INFEASIBLE = 10,
  CO2NET_ERR_INTERNAL = 11
} co2net_status;

typedef struct co2net_network co2net_network;
typedef struct co2net_solution co2net_solution;

CO2NET_API const char *co2net_version(void);
CO2NET_API const char *co2net_status_name(co2net_status status);

/* Thread-local detail for the most recent failing call; empty when none. */
CO2NET_API const char *co2net_last_error(void);

CO2NET_API void co2net_string_free(char *s);
CO2NET_API void co2net_network_free(co2net_network *net);
CO2NET_API void co2net_solution_free(co2net_solution *sol);

/* ---- fluid property kernels ------------------------------------------- */

/* Pure-CO2 vapor-liquid equilibrium pressure [Pa] at temperature [K]. */
CO2NET_API co2net_status co2net_saturation_pressure(double temperature_k,
                                                    double *pressure_pa);

/* Mole fractions ordered {CO2, H2, O2, N2}. Any output pointer may be NULL. */
CO2NET_API co2net_status co2net_fluid_state(
    double pressure_pa, double temperature_k, const double mole_fractions[4],
    double *density_kg_m3, double *enthalpy_j_kg, double *z_factor,
    double *joule_thomson_k_pa);

/* 1 when (P, T) is on the dense side of the pure-CO2 boundary. */
CO2NET_API co2net_status co2net_is_dense(double pressure_pa,
                                         double temperature_k, int *dense);

/* ---- network files ----------------------------------------------------- */

CO2NET_API co2net_status co2net_network_load(const char *geojson_path,
                                             co2net_network **out);
CO2NET_API co2net_status co2net_network_save(const co2net_network *net,
                                             const char *geojson_path);

/* Report of structural violations as JSON; empty list means simulatable.
 * boundary_json may be NULL to check the network alone. */
CO2NET_API co2net_status co2net_network_validate(const co2net_network *net,
                                                 const char *boundary_json,
                                                 char **report_json);

/* ---- topology construction --------------------------------------------- */

/* Builds the network from a sites CSV (header type,role,lat,lon,q_t_per_a)
 * and a corridor GeoJSON. options_json (may be NULL):
 *   {"initial_dn": "DN700", "hours_per_year": 8760,
 *    "hub_pressure_barg": 125, "injection_temperature_c": 10,
 *    "composition": {"co2":1,"h2":0,"o2":0,"n2":0},
 *    "assignments": [["source_id","sink_id"], ...]}
 * Returns CO2NET_ERR_UNREACHABLE (with outputs still set) when some
 * source-sink pairs cannot be routed. */
CO2NET_API co2net_status co2net_build_topology(
    const char *sites_csv_path, const char *corridors_geojson_path,
    const char *options_json, co2net_network **out_network,
    char **out_boundary_json, char **out_report_json);

/* ---- steady-state simulation ------------------------------------------- */

/* options_json (may be NULL):
 *   {"rel_tol":1e-8, "abs_tol_flow":1e-6, "max_outer_iterations":50,
 *    "max_newton_iterations":100, "damping":1.0, "step_m":1000,
 *    "friction":"hofer"|"nikuradse", "viscosity_pa_s":1e-4,
 *    "dense_warning_margin_bar":5, "flat_elevation":false,
 *    "initial_pressure_barg":125, "composition_override":{...},
 *    "eos_file":"path/to/override.json"}
 * Returns CO2NET_ERR_DENSE_PHASE (solution still produced) when stations
 * leave the dense phase. */
CO2NET_API co2net_status co2net_solve(const co2net_network *net,
                                      const char *boundary_json,
                                      const char *options_json,
                                      co2net_solution **out);

CO2NET_API co2net_status co2net_solution_summary(const co2net_solution *sol,
                                                 char **summary_json);
CO2NET_API co2net_status co2net_solution_nodes_csv(const co2net_solution *sol,
                                                   char **csv);
CO2NET_API co2net_status co2net_solution_edges_csv(const co2net_solution *sol,
                                                   char **csv);
CO2NET_API co2net_status co2net_solution_geojson(const co2net_solution *sol,
                                                 char **geojson);
CO2NET_API co2net_status co2net_solution_phase_nodes_csv(
    const co2net_solution *sol, char **csv);
CO2NET_API co2net_status co2net_solution_phase_curve_csv(
    const co2net_solution *sol, char **csv);

/* Station profile of one edge (header s_m,P_barg,T_C,rho_kgm3,v_ms,lambda,Re). */
CO2NET_API co2net_status co2net_solution_profile_csv(const co2net_solution *sol,
                                                     const char *edge_id,
                                                     char **csv);

/* Edge ids as a JSON array of strings (pipes only). */
CO2NET_API co2net_status co2net_solution_edge_ids(const co2net_solution *sol,
                                                  char **ids_json);

/* ---- design ------------------------------------------------------------- */

/* Diameter assignment, segmentation pump placement, cooling relaxation and
 * the cost report. options_json (may be NULL):
 *   {"catalog":"default"|"ait", "uniform_dn":"DN500",
 *    "target_velocity_m_s":5, "p_min_barg":85, "p_max_barg":180,
 *    "pump_outlet_barg":170, "cooler_initial_c":10, "cooler_max_c":45,
 *    "cooler_step_k":5, "pump_station_cost_eur":7.5e6,
 *    "solver":{...same as co2net_solve...}}
 * With "uniform_dn" the catalog label is applied to every pipe and the
 * design loop is skipped (cost-table reproduction mode); boundary_json may
 * then be NULL. */
CO2NET_API co2net_status co2net_design(const co2net_network *net,
                                       const char *boundary_json,
                                       const char *options_json,
                                       co2net_network **out_network,
                                       char **out_cost_json);

/* Cost report of an already-designed network. options_json as in
 * co2net_design (catalog and pump_station_cost_eur are honored). */
CO2NET_API co2net_status co2net_cost_report(const co2net_network *net,
                                            const char *options_json,
                                            char **out_cost_json);

/* Human-readable rendering of a cost report JSON document. */
CO2NET_API co2net_status co2net_cost_table(const char *cost_json,
                                           char **out_text);

#ifdef __cplusplus
}
#endif

#endif /* CO2NET_H */
