#pragma once

#include "orbit_isom/error.hpp"
#include "orbit_isom/linalg.hpp"
#include "orbit_isom/catalog.hpp"
#include "orbit_isom/repr_model.hpp"
#include "orbit_isom/commutant.hpp"
#include "orbit_isom/orbit_geometry.hpp"
#include "orbit_isom/isom_quotient.hpp"
#include "orbit_isom/lift_verify.hpp"
#include "orbit_isom/report_io.hpp"
#include "orbit_isom/fixtures.hpp"
#include "orbit_isom/acceptance.hpp"
