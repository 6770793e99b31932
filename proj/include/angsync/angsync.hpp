#pragma once

#include "angsync/bounds.hpp"
#include "angsync/certificate.hpp"
#include "angsync/error.hpp"
#include "angsync/experiment.hpp"
#include "angsync/hermitian.hpp"
#include "angsync/io.hpp"
#include "angsync/manifold.hpp"
#include "angsync/model.hpp"
#include "angsync/oracle.hpp"
#include "angsync/phase_vector.hpp"
#include "angsync/rng.hpp"
#include "angsync/solver.hpp"
#include "angsync/z2.hpp"
