#pragma once

#include "cpc/error.hpp"
#include "cpc/rng.hpp"
#include "cpc/geom.hpp"
#include "cpc/measure.hpp"
#include "cpc/depth.hpp"
#include "cpc/centerpoint.hpp"
#include "cpc/adversary.hpp"
#include "cpc/oracle.hpp"
#include "cpc/cutplane.hpp"
