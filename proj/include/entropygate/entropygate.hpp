#pragma once

#include "entropygate/convexity.hpp"
#include "entropygate/core.hpp"
#include "entropygate/eos.hpp"
#include "entropygate/euler1d.hpp"
#include "entropygate/lax.hpp"
#include "entropygate/propcheck.hpp"
#include "entropygate/report.hpp"
#include "entropygate/table_io.hpp"
#include "entropygate/thermo.hpp"
