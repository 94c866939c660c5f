#pragma once

#include "tagwalk/config.hpp"
#include "tagwalk/cooc.hpp"
#include "tagwalk/error.hpp"
#include "tagwalk/ingest.hpp"
#include "tagwalk/observables.hpp"
#include "tagwalk/parallel.hpp"
#include "tagwalk/pipeline.hpp"
#include "tagwalk/post.hpp"
#include "tagwalk/rng.hpp"
#include "tagwalk/substrate.hpp"
#include "tagwalk/theory.hpp"
#include "tagwalk/walker.hpp"
