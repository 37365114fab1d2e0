#pragma once

#include "love/amount_store.hpp"
#include "love/attackgen.hpp"
#include "love/error.hpp"
#include "love/evalharness.hpp"
#include "love/geoindex.hpp"
#include "love/ingest.hpp"
#include "love/observation.hpp"
#include "love/rng.hpp"
#include "love/synthetic.hpp"
#include "love/verifier.hpp"
