from cones.services.cone import cone_to_circuit, extract_cones, largest_cone
from locklab.commands import LabCommand
from netlist.services.bench import read_bench_file, write_bench


class Command(LabCommand):
    help = "Print the fan-in cone of every output, optionally writing the largest as a .bench"

    def add_arguments(self, parser):
        parser.add_argument('bench', help="Path to the .bench file")
        parser.add_argument('--largest', action='store_true', help="Only report the largest cone")
        parser.add_argument('--emit', metavar='OUT', help="Write the largest cone to this .bench file")

    def run(self, *args, **options):
        circuit = read_bench_file(options['bench'])
        cones = [largest_cone(circuit)] if options['largest'] else extract_cones(circuit)
        for cone in cones:
            self.stdout.write(f"{cone.root}: {cone.node_count} nodes "
                              f"({len(cone.gates)} gates, {len(cone.inputs)} inputs)")
        if options['emit']:
            cone = cones[0] if options['largest'] else largest_cone(circuit)
            self.write_file(options['emit'], write_bench(cone_to_circuit(cone, circuit)))
