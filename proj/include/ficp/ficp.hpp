#ifndef FICP_FICP_HPP
#define FICP_FICP_HPP

#include "ficp/alignment.hpp"
#include "ficp/correspondence.hpp"
#include "ficp/experiment.hpp"
#include "ficp/geometry.hpp"
#include "ficp/golden_section.hpp"
#include "ficp/json_io.hpp"
#include "ficp/kdtree.hpp"
#include "ficp/lambda_analysis.hpp"
#include "ficp/metrics.hpp"
#include "ficp/point_io.hpp"
#include "ficp/quadrature.hpp"
#include "ficp/random.hpp"
#include "ficp/registration.hpp"
#include "ficp/svd.hpp"
#include "ficp/synth.hpp"

#endif  // FICP_FICP_HPP
