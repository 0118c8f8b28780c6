#pragma once

#include "entlab/brems.hpp"
#include "entlab/decoherence.hpp"
#include "entlab/disorder.hpp"
#include "entlab/entropy.hpp"
#include "entlab/errors.hpp"
#include "entlab/mirrors.hpp"
#include "entlab/parallel.hpp"
#include "entlab/qstate.hpp"
#include "entlab/rng.hpp"
#include "entlab/walk1d.hpp"
