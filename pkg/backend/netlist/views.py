import logging

from drf_yasg.utils import swagger_auto_schema
from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.views import APIView

from cones.services.cone import extract_cones, insertion_order
from .serializers import BenchParseSerializer, ConeSummarySerializer
from .services.bench import parse_bench

logger = logging.getLogger(__name__)


class BenchParseView(APIView):
    """
    Parse bench text and return the circuit summary with one entry per output cone.
    Netlist errors come back as 400 with the error class and position.
    """
    permission_classes = [AllowAny]

    @swagger_auto_schema(request_body=BenchParseSerializer)
    def post(self, request):
        serializer = BenchParseSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        circuit = parse_bench(serializer.validated_data['bench'], name=serializer.validated_data['name'])
        cones = [
            {
                'root': cone.root,
                'gate_count': len(cone.gates),
                'input_count': len(cone.inputs),
                'node_count': cone.node_count,
                'insertion_order': insertion_order(cone),
            }
            for cone in extract_cones(circuit)
        ]
        logger.info(f"parsed {circuit.name}: {len(circuit.gates)} gates, {len(cones)} cones")
        return Response(
            {
                'summary': circuit.summary(),
                'cones': ConeSummarySerializer(cones, many=True).data,
            },
            status=status.HTTP_200_OK,
        )
