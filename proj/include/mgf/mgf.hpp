#ifndef MGF_MGF_HPP
#define MGF_MGF_HPP

// Everything at once.

#include "core.hpp"
#include "quadrature.hpp"
#include "constants.hpp"
#include "zeta_series.hpp"
#include "qseries.hpp"
#include "polylog.hpp"
#include "propagators.hpp"
#include "graphs.hpp"
#include "laurent.hpp"
#include "modular_graph.hpp"
#include "holo_graph.hpp"
#include "pslq.hpp"
#include "sv_maps.hpp"
#include "report.hpp"

#endif // MGF_MGF_HPP
