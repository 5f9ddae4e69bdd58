#pragma once

// Umbrella header for the real quadratic field toolkit.

#include "rqf/errors.hpp"
#include "rqf/intbase.hpp"
#include "rqf/cf_pell.hpp"
#include "rqf/forms.hpp"
#include "rqf/theorem_lab.hpp"
#include "rqf/scan.hpp"
