#pragma once

// Visible-light vital signs sensing: Lambertian channel simulation plus the
// breathing / heart rate estimation pipeline and its evaluation harness.

#include "vls/config_io.hpp"
#include "vls/errors.hpp"
#include "vls/fft.hpp"
#include "vls/filter.hpp"
#include "vls/metrics.hpp"
#include "vls/motion.hpp"
#include "vls/optics.hpp"
#include "vls/pipeline.hpp"
#include "vls/simulate.hpp"
#include "vls/sweep.hpp"
#include "vls/textio.hpp"
#include "vls/trace.hpp"
#include "vls/trace_io.hpp"
#include "vls/window.hpp"
