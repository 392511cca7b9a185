#include "carat/completeness.hpp"

namespace carat::completeness {

CompletenessReport zwonek_check(const geom::ReinhardtDomain& D) {
  CompletenessReport rep;

  rep.bounded = true;
  for (int j = 1; j <= D.n(); ++j) {
    const lp::PolyMax mx = D.log_sup(j);
    if (mx.unbounded) {
      rep.bounded = false;
      Witness w;
      w.axis = j;
      w.kind = "unbounded_domain";
      w.ray = mx.ray;
      rep.witnesses.push_back(std::move(w));
    }
  }

  for (int j = 1; j <= D.n(); ++j) rep.axis_results.push_back(D.axis_status(j));

  if (!rep.bounded) {
    rep.verdict = "not_applicable";
    return rep;
  }

  bool ok = true;
  for (const geom::AxisStatus& st : rep.axis_results) {
    if (!st.closure_meets || st.interior_meets) continue;
    ok = false;
    Witness w;
    w.axis = st.j;
    w.kind = "axis_violation";
    std::vector<double> c(D.n(), 0.0);
    c[st.j - 1] = -1.0;
    const lp::PolyMax down = geom::max_linear(D.log_polytope(), c);
    if (down.unbounded) w.ray = down.ray;
    for (int i = 0; i < static_cast<int>(D.constraints().size()); ++i)
      if (D.constraints()[i].a[st.j - 1] < 0.0) w.blocking_rows.push_back(i);
    w.reduced_infeasible = w.blocking_rows.empty();
    rep.witnesses.push_back(std::move(w));
  }
  rep.verdict = ok ? "c_complete" : "not_c_complete";
  return rep;
}

}  // namespace carat::completeness
