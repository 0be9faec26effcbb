"""Tools for structural Ramsey constructions on finite structures."""

from .errors import (
    InvalidInput,
    NotClosed,
    RamseykitError,
    SearchCapExceeded,
    SizeCapExceeded,
)
from .structures import (
    EMBEDDING,
    GRAPH_LANGUAGE,
    HOM_EMBEDDING,
    HOMOMORPHISM,
    ISOMORPHISM,
    MONOMORPHISM,
    U_CLOSED_EMBEDDING,
    EmbeddingMap,
    Language,
    PartialAutomorphism,
    Structure,
    ValidationReport,
    are_isomorphic,
    automorphisms,
    classify_map,
    enumerate_embeddings,
    enumerate_partial_automorphisms,
    gaifman_graph,
    generated_closure,
    image_is_u_closed,
    induced_substructure,
    is_irreducible,
    is_ordered,
    is_rigid,
    validate_structure,
)
from .catalog import (
    ORDER_LANGUAGE,
    ORDERED_GRAPH_LANGUAGE,
    ORIENTED_GRAPH_LANGUAGE,
    make_chain,
    make_clique,
    make_cycle,
    make_empty_graph,
    make_graph,
    make_oriented_graph,
    make_path,
    ordered_edge,
    ordered_vertex,
)
from .amalgamation import (
    AmalgamationProblem,
    ClassPropertiesReport,
    OverlapNotInIrreducible,
    TreeAmalgamSpec,
    TreeJoin,
    TreeLeaf,
    check_class_properties,
    forbidden_free,
    free_amalgam,
    is_amalgam,
    tree_amalgam,
)
from .halesjewett import (
    ParameterWord,
    Word,
    all_words,
    enumerate_lines,
    enumerate_parameter_words,
    find_bad_coloring,
    hj_number,
    line_of,
    substitute,
)
from .completion import (
    BA_LANGUAGE,
    EdgeLabelledGraph,
    NonMetricCycleWitness,
    ba_embedding_correspondence,
    boolean_algebra_structure,
    check_c_relation,
    complete_equivalence,
    complete_metric,
    complete_poset_linext,
    embedding_to_rigid_surjection,
    enumerate_rigid_surjections,
    equivalence_to_imaginary,
    extend_linear_order,
    imaginary_to_equivalence,
    injectivize_homomorphism_embedding,
    rigid_surjection_to_embedding,
    transitive_closure,
)
from .orientations import (
    OrientedGraph,
    class_membership,
    enumerate_2orientations,
    find_2orientation,
    predimension,
    substructure_order,
)
from .arrows import (
    ColoringWitness,
    RamseyDegreeReport,
    check_arrow,
    devlin_degree,
    ramsey_degree_in,
    tangent_numbers,
    tree_of_types,
)
from .eppa import (
    EppaInstance,
    EppaReport,
    extend_to_automorphism,
    is_eppa_witness,
    npartite_tournament_witness,
    validate_npartite_tournament,
)
from .partite import (
    DEFAULT_CAPS,
    ENUM_EMBEDDINGS,
    ENUM_MONOTONE,
    MODE_FULL,
    MODE_WITNESS,
    ClosedConstructionResult,
    ConstructionResult,
    ConstructionTrace,
    EmptyAlphabet,
    MissingWitness,
    NoEmbeddings,
    PartiteLemmaResult,
    PartiteReport,
    PartiteSystem,
    PartiteWitnesses,
    PictureResult,
    PictureStep,
    SizeCaps,
    SparsenResult,
    TreelikeReport,
    TreelikeVerdict,
    TreeWitness,
    induced_construction,
    induced_partite_lemma,
    is_locally_treelike,
    make_partite_system,
    partite_language,
    partite_lemma,
    picture_lemma,
    power,
    recursive_closed_construction,
    sparsen,
    trace_lines,
    validate_partite,
)

__version__ = "0.1.0"
