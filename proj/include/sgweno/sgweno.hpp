#pragma once

#include "sgweno/error.hpp"
#include "sgweno/harness.hpp"
#include "sgweno/mesh.hpp"
#include "sgweno/output.hpp"
#include "sgweno/parallel.hpp"
#include "sgweno/problems.hpp"
#include "sgweno/prolong.hpp"
#include "sgweno/time_march.hpp"
#include "sgweno/weno.hpp"
