#pragma once

// Everything except the JSON layer (json_io.hpp, acceptance.hpp), which also
// needs OpenSSL's libcrypto at link time.
#include <mlef/brute_force.hpp>
#include <mlef/commutators.hpp>
#include <mlef/conjugacy.hpp>
#include <mlef/errors.hpp>
#include <mlef/finite_group.hpp>
#include <mlef/fo_axioms.hpp>
#include <mlef/gz_norm.hpp>
#include <mlef/lamplighter.hpp>
#include <mlef/norm_ops.hpp>
#include <mlef/norm_table.hpp>
#include <mlef/oracle.hpp>
#include <mlef/perm.hpp>
#include <mlef/random.hpp>
#include <mlef/rational.hpp>
#include <mlef/simple_props.hpp>
